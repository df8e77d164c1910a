#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bphi/norms.hpp"

namespace bphi {

struct RunConfig {
    std::vector<std::string> corpus = {"mono:1", "mono:2", "log1mz", "lacunary:16"};
    std::vector<std::string> weights = {"power:0", "power:0.25", "power:0.5"};
    std::vector<double> r_grid;              // default 1 - 2^-k, k = 1..10
    std::vector<double> gamma_grid = {0.01, 0.05, 0.1};
    int rays = 32;
    double tolerance = 0.02;
    QuadratureSpec quad;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out_dir = "out";
    std::string format = "csv";              // csv | json

    RunConfig();
    void validate() const;

    static std::vector<double> geometric_r_grid(int kmin, int kmax);
    static RunConfig from_json_string(const std::string& text);
    static RunConfig from_json_file(const std::string& path);
    std::string to_json_string() const;
};

struct VerificationRecord {
    std::string theorem;  // T1 | T1-corollary | T2:g=<gamma> | T3 | T3-mu-chain | bloch-membership
    std::string fn;
    std::string weight;
    double r = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = false;
    std::string error;    // nonempty when the cell failed to evaluate
};

// lhs = ||f_r||_BMOA (Garsia), rhs = ||f||_{B_phi} sqrt(g(1-r^2)).
std::vector<VerificationRecord> verify_theorem1(const RunConfig& cfg);

// Bloch case: weight power:0, rhs = ||f||_B sqrt(|log(1-r^2)|).
std::vector<VerificationRecord> verify_theorem1_corollary(const RunConfig& cfg);

struct Theorem2Result {
    std::vector<VerificationRecord> records;
    // gamma -> empirical M (max of the exponential integral over corpus x r).
    std::vector<std::pair<double, double>> m_table;
};
Theorem2Result verify_theorem2(const RunConfig& cfg);

struct Theorem3Result {
    std::vector<VerificationRecord> records;
    std::vector<RayProfile> profiles;
    // "<fn>|<weight>" -> fitted gamma1 (max ratio over the whole grid / norm).
    std::map<std::string, double> gamma1_emp;
};
Theorem3Result verify_theorem3(const RunConfig& cfg);

std::vector<VerificationRecord> verify_bloch_membership(const RunConfig& cfg);

// Stable column order: theorem, fn, weight, r, lhs, rhs, ratio, pass.
// Records are sorted by (theorem, fn, weight, r) before writing.
void emit_report_csv(std::vector<VerificationRecord> records, std::ostream& out);
std::string report_json(const std::vector<VerificationRecord>& records);

struct RunSummary {
    int passed = 0;
    int failed = 0;
    std::map<std::string, std::pair<int, int>> by_theorem; // pass/fail counts
    std::vector<std::string> files_written;
};

// Runs the selected theorems ("t1", "t1c", "t2", "t3", "bloch" or "all"),
// writes report files under cfg.out_dir, returns pass/fail counts.
RunSummary run_verification(const RunConfig& cfg, const std::vector<std::string>& theorems);

std::string summary_json(const RunSummary& s);

} // namespace bphi
