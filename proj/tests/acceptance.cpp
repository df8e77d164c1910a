// Acceptance gate: one printed PASS/FAIL line per criterion.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"

#include "bphi/functions.hpp"
#include "bphi/harness.hpp"
#include "bphi/norms.hpp"
#include "bphi/quadrature.hpp"
#include "bphi/weights.hpp"

using namespace bphi;

namespace {

struct Criterion {
    int id;
    const char* name;
    bool ok = true;
    std::vector<std::string> notes;

    Criterion(int i, const char* n) : id(i), name(n) {}

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back(what);
        }
    }

    ~Criterion() {
        std::printf("[acceptance] %d %s: %s\n", id, name, ok ? "PASS" : "FAIL");
        for (const auto& n : notes) std::printf("[acceptance]     %s\n", n.c_str());
        std::fflush(stdout);
    }
};

int default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("1 poisson identity") {
    Criterion c(1, "poisson identity");
    std::mt19937_64 rng(1995);
    std::uniform_real_distribution<double> radius(0.0, 0.9);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    for (int i = 0; i < 50; ++i) {
        double rho = radius(rng), th = angle(rng);
        Complex z{rho * std::cos(th), rho * std::sin(th)};
        double v = integrate_circle(
            [z](Complex zeta) {
                return (1.0 - std::norm(z)) / std::norm(1.0 - zeta * z);
            },
            512);
        c.expect(std::abs(v - 1.0) <= 1e-9,
                 "deviation " + std::to_string(std::abs(v - 1.0)) + " at sample "
                     + std::to_string(i));
    }
    CHECK(c.ok);
}

TEST_CASE("2 growth integral closed forms") {
    Criterion c(2, "growth integral closed forms");
    for (double alpha : {0.1, 0.25, 0.5, 1.0}) {
        Weight w = Weight::power(alpha);
        for (double x : {0.1, 0.5, 0.9}) {
            // independent reference: exact antiderivative of t^(2a-1)
            double ref = (1.0 - std::pow(x, 2.0 * alpha)) / (2.0 * alpha);
            double quad = integrate_interval(
                [&](double t) { return w.phi(t) * w.phi(t) / t; }, x, 1.0, 200);
            c.expect(std::abs(w.growth_integral(x) - ref) <= 1e-10 * std::max(1.0, ref),
                     "closed form off at alpha=" + std::to_string(alpha));
            c.expect(std::abs(quad - ref) <= 1e-10 * std::max(1.0, ref),
                     "quadrature off at alpha=" + std::to_string(alpha));
        }
    }
    Weight bloch = Weight::power(0.0);
    for (double x : {0.1, 0.5, 0.9})
        c.expect(std::abs(bloch.growth_integral(x) - std::abs(std::log(x))) <= 1e-12,
                 "Bloch growth integral off at x=" + std::to_string(x));
    CHECK(c.ok);
}

TEST_CASE("3 norm oracles") {
    Criterion c(3, "norm oracles");
    QuadratureSpec spec;
    Weight bloch = Weight::power(0.0);

    double z_bmoa = bmoa_garsia_norm(AnalyticFunction::monomial(1), spec).value;
    c.expect(std::abs(z_bmoa - std::sqrt(0.5)) <= 1e-5,
             "||z||_BMOA = " + std::to_string(z_bmoa));

    double z2_bmoa = bmoa_garsia_norm(AnalyticFunction::monomial(2), spec).value;
    c.expect(std::abs(z2_bmoa - std::sqrt(2.0 / 3.0)) <= 1e-4,
             "||z^2||_BMOA = " + std::to_string(z2_bmoa));

    double z_b = bphi_norm(AnalyticFunction::monomial(1), bloch, spec).value;
    c.expect(std::abs(z_b - 1.0) <= 1e-9, "||z||_B = " + std::to_string(z_b));

    QuadratureSpec tight = spec;
    tight.delta = 1e-6;
    double log_b = bphi_norm(AnalyticFunction::log_one_minus_z(), bloch, tight).value;
    c.expect(log_b <= 2.0 && 2.0 - log_b <= 1e-3,
             "||log(1-z)||_B = " + std::to_string(log_b));

    QuadratureSpec deep = spec;
    deep.refine = 8;
    double z2_b = bphi_norm(AnalyticFunction::monomial(2), bloch, deep).value;
    c.expect(std::abs(z2_b - 4.0 / (3.0 * std::sqrt(3.0))) <= 1e-6,
             "||z^2||_B = " + std::to_string(z2_b));
    CHECK(c.ok);
}

TEST_CASE("4 theorem 1 over the full corpus") {
    Criterion c(4, "theorem 1 inequality sweep");
    RunConfig cfg;
    cfg.workers = default_workers();
    auto records = verify_theorem1(cfg);
    c.expect(records.size() == cfg.corpus.size() * cfg.weights.size() * cfg.r_grid.size(),
             "unexpected record count");
    for (const auto& rec : records) {
        c.expect(rec.error.empty(), rec.fn + "/" + rec.weight + ": " + rec.error);
        c.expect(rec.ratio <= 1.02,
                 rec.fn + "/" + rec.weight + " r=" + std::to_string(rec.r)
                     + " ratio=" + std::to_string(rec.ratio));
    }
    CHECK(c.ok);
}

TEST_CASE("5 layer-cake identity") {
    Criterion c(5, "layer-cake identity");
    const int ntheta = 2048;
    for (const auto& label : builtin_corpus_labels()) {
        auto f = AnalyticFunction::parse(label);
        for (double r : {0.5, 0.9, 0.99}) {
            std::vector<double> moduli;
            for (int k = 0; k < ntheta; ++k) {
                double th = 6.283185307179586 * k / ntheta;
                moduli.push_back(std::abs(f.eval(r * Complex{std::cos(th), std::sin(th)})));
            }
            auto sample = distribution_function(f, r, default_lambda_grid(f, r, ntheta), ntheta);
            for (double p : {1.0, 2.0, 4.0}) {
                double direct = 0.0;
                for (double m : moduli) direct += std::pow(m, p);
                direct /= ntheta;
                double cake = layer_cake_moment(sample, p);
                c.expect(std::abs(cake - direct) <= 1e-3 * direct,
                         label + " r=" + std::to_string(r) + " p=" + std::to_string(p)
                             + " rel err "
                             + std::to_string(std::abs(cake - direct) / direct));
            }
        }
    }
    CHECK(c.ok);
}

TEST_CASE("6 exponential integrability") {
    Criterion c(6, "exponential integrability");
    RunConfig cfg;
    cfg.workers = default_workers();
    auto result = verify_theorem2(cfg);
    c.expect(result.m_table.size() == 3, "unexpected gamma grid");
    double prev = 0.0;
    for (const auto& [gamma, m] : result.m_table) {
        if (gamma == 0.05)
            c.expect(std::isfinite(m), "M_emp overflowed at gamma=0.05");
        c.expect(m >= prev, "M_emp not monotone at gamma=" + std::to_string(gamma));
        prev = m;
    }
    for (const auto& rec : result.records)
        c.expect(rec.pass, rec.theorem + " " + rec.fn + "/" + rec.weight + " failed: " + rec.error);
    CHECK(c.ok);
}

TEST_CASE("7 radial growth") {
    Criterion c(7, "radial growth bounds");
    RunConfig cfg;
    cfg.workers = default_workers();
    cfg.r_grid = RunConfig::geometric_r_grid(2, 12);
    cfg.rays = 32;
    auto result = verify_theorem3(cfg);
    for (const auto& rec : result.records)
        c.expect(rec.pass, rec.theorem + " " + rec.fn + "/" + rec.weight + " r="
                               + std::to_string(rec.r) + " failed: " + rec.error);
    for (const auto& [key, g1] : result.gamma1_emp)
        c.expect(std::isfinite(g1), key + ": gamma1 not finite");

    // worst ray for log(1-z) is the positive real axis; closed form at
    // r = 1 - 2^-10 with the Bloch weight:
    //   |ln(1-r)| / ( ln|ln(1-r)| * sqrt(|ln(1-r^2)|) )
    double x = std::ldexp(1.0, -10);
    double r = 1.0 - x;
    double oracle = (10.0 * std::log(2.0))
                  / (std::log(10.0 * std::log(2.0)) * std::sqrt(std::abs(std::log(x * (2.0 - x)))));
    double worst = 0.0;
    auto f = AnalyticFunction::log_one_minus_z();
    Weight bloch = Weight::power(0.0);
    for (int j = 0; j < 32; ++j) {
        double ang = 6.283185307179586 * j / 32;
        worst = std::max(worst,
                         growth_ratio(f, bloch, Complex{std::cos(ang), std::sin(ang)}, r));
    }
    c.expect(std::abs(worst - oracle) <= 0.02 * oracle,
             "worst-ray ratio " + std::to_string(worst) + " vs oracle "
                 + std::to_string(oracle));
    CHECK(c.ok);
}

TEST_CASE("8 bloch membership split") {
    Criterion c(8, "bloch membership split");
    auto quotient = [](const AnalyticFunction& f, double x) {
        return (1.0 - x * x) * std::abs(f.deriv(Complex{x, 0.0}));
    };
    auto log1 = AnalyticFunction::log_one_minus_z();
    auto log2 = AnalyticFunction::log_squared_one_minus_z();
    for (int k = 1; k <= 20; ++k) {
        double x = 1.0 - std::ldexp(1.0, -k);
        c.expect(quotient(log1, x) <= 2.0 + 1e-9,
                 "log(1-z) quotient exceeds 2 at k=" + std::to_string(k));
    }
    double x20 = 1.0 - std::ldexp(1.0, -20);
    double q20 = quotient(log2, x20);
    double closed = 2.0 * (1.0 + x20) * std::abs(std::log(1.0 - x20));
    c.expect(q20 > 10.0, "log^2(1-z) quotient did not exceed 10: " + std::to_string(q20));
    c.expect(std::abs(q20 - closed) <= 1e-6 * closed,
             "quotient " + std::to_string(q20) + " vs closed form " + std::to_string(closed));
    auto records = verify_bloch_membership(RunConfig());
    for (const auto& rec : records)
        c.expect(rec.pass, rec.fn + " membership record failed");
    CHECK(c.ok);
}

TEST_CASE("9 deterministic reports") {
    Criterion c(9, "deterministic reports");
    const char* cli = std::getenv("BPHI_LAB_CLI");
    if (!cli || !*cli) {
        c.expect(false, "BPHI_LAB_CLI is not set");
        CHECK(c.ok);
        return;
    }
    namespace fs = std::filesystem;
    std::string cfg_path = "acceptance_cfg.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({
            "corpus": ["mono:1", "log1mz"],
            "weights": ["power:0", "power:0.5"],
            "r_grid": {"kmin": 1, "kmax": 6},
            "rays": 8,
            "quadrature": {"ntheta": 64, "nrho": 32, "refine": 2}
        })";
    }
    auto run = [&](const std::string& out_dir, int workers) {
        std::string cmd = std::string("\"") + cli + "\" verify --config " + cfg_path
                        + " --out " + out_dir + " --seed 7 --workers "
                        + std::to_string(workers) + " > " + out_dir + ".log 2>&1";
        fs::remove_all(out_dir);
        return std::system(cmd.c_str());
    };
    int s1 = run("acceptance_out_a", 1);
    int s2 = run("acceptance_out_b", 4);
    c.expect(s1 == s2, "exit statuses differ");
    c.expect(WIFEXITED(s1) && (WEXITSTATUS(s1) == 0 || WEXITSTATUS(s1) == 3),
             "unexpected exit status from the first run");
    std::string a = read_file("acceptance_out_a/report.csv");
    std::string b = read_file("acceptance_out_b/report.csv");
    c.expect(!a.empty(), "first run produced no report");
    c.expect(a == b, "reports differ between worker counts");
    fs::remove(cfg_path);
    fs::remove("acceptance_out_a.log");
    fs::remove("acceptance_out_b.log");
    fs::remove_all("acceptance_out_a");
    fs::remove_all("acceptance_out_b");
    CHECK(c.ok);
}
