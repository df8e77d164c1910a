// bphi-lab: disk function-space norms and theorem verification runs.
// Thin front end over the C API; stdout carries machine-readable JSON only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bphi_lab.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCompute = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailed = 3;

int finish(bphi_status status, char* out) {
    if (out) {
        std::cout << out << "\n";
        bphi_string_free(out);
    }
    if (status == BPHI_OK) return kExitOk;
    std::cerr << "error: " << bphi_last_error() << "\n";
    if (status == BPHI_ERR_ARGUMENT) return kExitUsage;
    if (status == BPHI_ERR_VERIFY) return kExitVerifyFailed;
    return kExitCompute;
}

struct QuadFlags {
    int ntheta = -1;
    int nrho = -1;
    double delta = -1.0;
    int refine = -1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--ntheta", ntheta, "angular quadrature nodes");
        cmd->add_option("--nrho", nrho, "radial quadrature nodes");
        cmd->add_option("--delta", delta, "boundary cutoff for sup searches");
        cmd->add_option("--refine", refine, "local refinement levels");
    }

    void apply(json& req) const {
        json q = json::object();
        if (ntheta >= 0) q["ntheta"] = ntheta;
        if (nrho >= 0) q["nrho"] = nrho;
        if (delta >= 0.0) q["delta"] = delta;
        if (refine >= 0) q["refine"] = refine;
        if (!q.empty()) req["quadrature"] = q;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"function-space norms on the unit disk and theorem verification"};
    app.require_subcommand(1);

    // norm
    auto* norm_cmd = app.add_subcommand("norm", "compute a norm estimate");
    std::string norm_kind = "bphi", norm_fn, norm_weight;
    double norm_r = -1.0;
    QuadFlags norm_quad;
    norm_cmd->add_option("--kind", norm_kind, "bphi | bmoa | bmo-arc")->capture_default_str();
    norm_cmd->add_option("--fn", norm_fn, "function label")->required();
    norm_cmd->add_option("--weight", norm_weight, "weight label (bphi kind)");
    norm_cmd->add_option("--r", norm_r, "dilation radius");
    norm_quad.attach(norm_cmd);

    // g
    auto* g_cmd = app.add_subcommand("g", "growth integral of a weight");
    std::string g_weight;
    double g_x = 0.0;
    g_cmd->add_option("--weight", g_weight, "weight label")->required();
    g_cmd->add_option("--x", g_x, "lower integration limit in (0,1)")->required();

    // dist
    auto* dist_cmd = app.add_subcommand("dist", "boundary distribution function E(lambda)");
    std::string dist_fn, dist_out;
    double dist_r = 0.0, dist_lambda_max = -1.0;
    int dist_ntheta = 2048, dist_npoints = 2000;
    dist_cmd->add_option("--fn", dist_fn, "function label")->required();
    dist_cmd->add_option("--r", dist_r, "dilation radius")->required();
    dist_cmd->add_option("--ntheta", dist_ntheta, "boundary sample count");
    dist_cmd->add_option("--lambda-max", dist_lambda_max, "top of the lambda grid");
    dist_cmd->add_option("--npoints", dist_npoints, "lambda grid size");
    dist_cmd->add_option("--out", dist_out, "write lambda,E rows to this CSV file");

    // expint
    auto* exp_cmd = app.add_subcommand("expint", "exponential boundary integral");
    std::string exp_fn, exp_weight;
    double exp_r = 0.0, exp_gamma = 0.0;
    QuadFlags exp_quad;
    exp_cmd->add_option("--fn", exp_fn, "function label")->required();
    exp_cmd->add_option("--weight", exp_weight, "weight label")->required();
    exp_cmd->add_option("--r", exp_r, "dilation radius")->required();
    exp_cmd->add_option("--gamma", exp_gamma, "exponent scale")->required();
    exp_quad.attach(exp_cmd); // --ntheta doubles as the boundary sample count

    // growth
    auto* growth_cmd = app.add_subcommand("growth", "radial growth ratio over rays");
    std::string growth_fn, growth_weight;
    double growth_r = 0.0;
    int growth_rays = 32;
    growth_cmd->add_option("--fn", growth_fn, "function label")->required();
    growth_cmd->add_option("--weight", growth_weight, "weight label")->required();
    growth_cmd->add_option("--r", growth_r, "radius, must exceed 1 - 1/e")->required();
    growth_cmd->add_option("--rays", growth_rays, "equispaced rays on the circle");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run theorem verification");
    std::string verify_theorem = "all", verify_config, verify_out, verify_format;
    long long verify_seed = -1;
    int verify_workers = -1, verify_rays = -1;
    QuadFlags verify_quad;
    verify_cmd->add_option("--theorem", verify_theorem, "t1 | t1c | t2 | t3 | bloch | all")
        ->capture_default_str();
    verify_cmd->add_option("--config", verify_config, "RunConfig JSON file");
    verify_cmd->add_option("--out", verify_out, "output directory");
    verify_cmd->add_option("--seed", verify_seed, "seed for sampled quantities");
    verify_cmd->add_option("--workers", verify_workers, "worker thread budget");
    verify_cmd->add_option("--rays", verify_rays, "ray count for theorem 3");
    verify_cmd->add_option("--format", verify_format, "csv | json");
    verify_quad.attach(verify_cmd);

    // corpus
    app.add_subcommand("corpus", "list built-in function labels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    char* out = nullptr;

    if (norm_cmd->parsed()) {
        json req;
        req["kind"] = norm_kind;
        req["fn"] = norm_fn;
        if (!norm_weight.empty()) req["weight"] = norm_weight;
        if (norm_r >= 0.0) req["r"] = norm_r;
        norm_quad.apply(req);
        return finish(bphi_run_norm(req.dump().c_str(), &out), out);
    }

    if (g_cmd->parsed()) {
        json req;
        req["weight"] = g_weight;
        req["x"] = g_x;
        return finish(bphi_run_g(req.dump().c_str(), &out), out);
    }

    if (dist_cmd->parsed()) {
        json req;
        req["fn"] = dist_fn;
        req["r"] = dist_r;
        req["ntheta"] = dist_ntheta;
        req["npoints"] = dist_npoints;
        if (dist_lambda_max >= 0.0) req["lambda_max"] = dist_lambda_max;
        bphi_status status = bphi_run_dist(req.dump().c_str(), &out);
        if (status == BPHI_OK && !dist_out.empty()) {
            json resp = json::parse(out);
            std::ofstream csv(dist_out, std::ios::binary);
            if (!csv) {
                std::cerr << "error: cannot open " << dist_out << " for writing\n";
                bphi_string_free(out);
                return kExitCompute;
            }
            csv << "lambda,E\r\n";
            const auto& lambda = resp.at("lambda");
            const auto& E = resp.at("E");
            char buf[80];
            for (std::size_t i = 0; i < lambda.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%.12g,%.12g\r\n",
                              lambda[i].get<double>(), E[i].get<double>());
                csv << buf;
            }
        }
        return finish(status, out);
    }

    if (exp_cmd->parsed()) {
        json req;
        req["fn"] = exp_fn;
        req["weight"] = exp_weight;
        req["r"] = exp_r;
        req["gamma"] = exp_gamma;
        if (exp_quad.ntheta >= 0) req["ntheta"] = exp_quad.ntheta;
        exp_quad.apply(req);
        return finish(bphi_run_expint(req.dump().c_str(), &out), out);
    }

    if (growth_cmd->parsed()) {
        json req;
        req["fn"] = growth_fn;
        req["weight"] = growth_weight;
        req["r"] = growth_r;
        req["rays"] = growth_rays;
        return finish(bphi_run_growth(req.dump().c_str(), &out), out);
    }

    if (verify_cmd->parsed()) {
        json cfg = json::object();
        if (!verify_config.empty()) {
            std::ifstream in(verify_config);
            if (!in) {
                std::cerr << "error: cannot open config file " << verify_config << "\n";
                return kExitUsage;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            try {
                cfg = json::parse(ss.str());
            } catch (const json::exception& e) {
                std::cerr << "error: bad config JSON: " << e.what() << "\n";
                return kExitUsage;
            }
        }
        cfg["theorems"] = json::array({verify_theorem});
        if (!verify_out.empty()) cfg["out_dir"] = verify_out;
        if (verify_seed >= 0) cfg["seed"] = verify_seed;
        if (verify_workers >= 0) cfg["workers"] = verify_workers;
        if (verify_rays >= 0) cfg["rays"] = verify_rays;
        if (!verify_format.empty()) cfg["format"] = verify_format;
        json q = cfg.value("quadrature", json::object());
        json overrides;
        verify_quad.apply(overrides);
        if (overrides.contains("quadrature"))
            for (const auto& [k, v] : overrides["quadrature"].items()) q[k] = v;
        if (!q.empty()) cfg["quadrature"] = q;
        return finish(bphi_run_verify(cfg.dump().c_str(), &out), out);
    }

    // corpus
    return finish(bphi_corpus_list(&out), out);
}
