#include "bphi_lab.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <numbers>
#include <string>

#include "bphi/errors.hpp"
#include "bphi/functions.hpp"
#include "bphi/harness.hpp"
#include "bphi/norms.hpp"
#include "bphi/quadrature.hpp"
#include "bphi/weights.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

bphi_status fail(bphi_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

bphi_status translate_current_exception() {
    try {
        throw;
    } catch (const bphi::ArgumentError& e) {
        return fail(BPHI_ERR_ARGUMENT, e.what());
    } catch (const bphi::DomainError& e) {
        return fail(BPHI_ERR_DOMAIN, e.what());
    } catch (const json::exception& e) {
        return fail(BPHI_ERR_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(BPHI_ERR_COMPUTE, e.what());
    } catch (...) {
        return fail(BPHI_ERR_COMPUTE, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bphi_status emit(const json& j, char** out_json) {
    if (!out_json) return fail(BPHI_ERR_ARGUMENT, "null output pointer");
    *out_json = dup_string(j.dump());
    if (!*out_json) return fail(BPHI_ERR_COMPUTE, "allocation failure");
    g_last_error.clear();
    return BPHI_OK;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) throw bphi::ArgumentError("unknown request field: " + key);
    }
}

bphi::QuadratureSpec spec_from_request(const json& j) {
    if (!j.contains("quadrature")) return {};
    return bphi::QuadratureSpec::from_json_string(j.at("quadrature").dump());
}

json estimate_to_json(const bphi::NormEstimate& est) {
    json j;
    j["value"] = est.value;
    j["witness"] = {{"re", est.witness.real()}, {"im", est.witness.imag()}};
    j["kind"] = bphi::to_string(est.kind);
    j["spec"] = json::parse(est.spec.to_json_string());
    if (!est.ring_values.empty()) {
        json rings = json::array();
        for (const auto& [s, v] : est.ring_values)
            rings.push_back({{"radius", s}, {"value", v}});
        j["ring_values"] = rings;
        j["witness_on_cutoff"] = est.witness_on_cutoff;
    }
    return j;
}

} // namespace

extern "C" {

struct bphi_function {
    bphi::AnalyticFunction fn;
};

struct bphi_weight {
    bphi::Weight w;
};

bphi_status bphi_function_create(const char* label, bphi_function** out) {
    if (!label || !out) return fail(BPHI_ERR_ARGUMENT, "null argument");
    try {
        *out = new bphi_function{bphi::AnalyticFunction::parse(label)};
        g_last_error.clear();
        return BPHI_OK;
    } catch (...) {
        return translate_current_exception();
    }
}

void bphi_function_destroy(bphi_function* f) { delete f; }

bphi_status bphi_function_eval(const bphi_function* f, double re, double im,
                               double* out_re, double* out_im) {
    if (!f || !out_re || !out_im) return fail(BPHI_ERR_ARGUMENT, "null argument");
    try {
        auto v = f->fn.eval({re, im});
        *out_re = v.real();
        *out_im = v.imag();
        g_last_error.clear();
        return BPHI_OK;
    } catch (...) {
        return translate_current_exception();
    }
}

bphi_status bphi_function_deriv(const bphi_function* f, double re, double im,
                                double* out_re, double* out_im) {
    if (!f || !out_re || !out_im) return fail(BPHI_ERR_ARGUMENT, "null argument");
    try {
        auto v = f->fn.deriv({re, im});
        *out_re = v.real();
        *out_im = v.imag();
        g_last_error.clear();
        return BPHI_OK;
    } catch (...) {
        return translate_current_exception();
    }
}

bphi_status bphi_weight_create(const char* label, bphi_weight** out) {
    if (!label || !out) return fail(BPHI_ERR_ARGUMENT, "null argument");
    try {
        *out = new bphi_weight{bphi::Weight::parse(label)};
        g_last_error.clear();
        return BPHI_OK;
    } catch (...) {
        return translate_current_exception();
    }
}

void bphi_weight_destroy(bphi_weight* w) { delete w; }

bphi_status bphi_weight_phi(const bphi_weight* w, double t, double* out) {
    if (!w || !out) return fail(BPHI_ERR_ARGUMENT, "null argument");
    try {
        *out = w->w.phi(t);
        g_last_error.clear();
        return BPHI_OK;
    } catch (...) {
        return translate_current_exception();
    }
}

bphi_status bphi_weight_g(const bphi_weight* w, double x, double* out) {
    if (!w || !out) return fail(BPHI_ERR_ARGUMENT, "null argument");
    try {
        *out = w->w.growth_integral(x);
        g_last_error.clear();
        return BPHI_OK;
    } catch (...) {
        return translate_current_exception();
    }
}

bphi_status bphi_run_norm(const char* request_json, char** out_json) {
    if (!request_json) return fail(BPHI_ERR_ARGUMENT, "null request");
    try {
        json req = json::parse(request_json);
        reject_unknown_keys(req, {"kind", "fn", "weight", "r", "quadrature"});
        auto kind = req.value("kind", std::string("bphi"));
        auto f = bphi::AnalyticFunction::parse(req.at("fn").get<std::string>());
        auto spec = spec_from_request(req);
        json resp;
        if (kind == "bphi") {
            auto w = bphi::Weight::parse(req.at("weight").get<std::string>());
            resp = estimate_to_json(bphi::bphi_norm(f, w, spec));
        } else if (kind == "bmoa") {
            if (req.contains("r"))
                resp = estimate_to_json(bphi::bmoa_garsia_norm(
                    bphi::dilate(f, req.at("r").get<double>()), spec));
            else
                resp = estimate_to_json(bphi::bmoa_garsia_norm(f, spec));
        } else if (kind == "bmo-arc") {
            resp = estimate_to_json(bphi::bmo_arc_norm(
                bphi::dilate(f, req.at("r").get<double>()), spec.ntheta));
        } else {
            throw bphi::ArgumentError("unknown norm kind: " + kind);
        }
        resp["request"] = req;
        return emit(resp, out_json);
    } catch (...) {
        return translate_current_exception();
    }
}

bphi_status bphi_run_g(const char* request_json, char** out_json) {
    if (!request_json) return fail(BPHI_ERR_ARGUMENT, "null request");
    try {
        json req = json::parse(request_json);
        reject_unknown_keys(req, {"weight", "x"});
        auto w = bphi::Weight::parse(req.at("weight").get<std::string>());
        json resp;
        resp["value"] = w.growth_integral(req.at("x").get<double>());
        resp["request"] = req;
        return emit(resp, out_json);
    } catch (...) {
        return translate_current_exception();
    }
}

bphi_status bphi_run_dist(const char* request_json, char** out_json) {
    if (!request_json) return fail(BPHI_ERR_ARGUMENT, "null request");
    try {
        json req = json::parse(request_json);
        reject_unknown_keys(req, {"fn", "r", "ntheta", "lambda_max", "npoints"});
        auto f = bphi::AnalyticFunction::parse(req.at("fn").get<std::string>());
        double r = req.at("r").get<double>();
        int ntheta = req.value("ntheta", 2048);
        int npoints = req.value("npoints", 2000);
        std::vector<double> grid;
        if (req.contains("lambda_max")) {
            double top = req.at("lambda_max").get<double>();
            for (int i = 0; i < npoints; ++i)
                grid.push_back(top * i / (npoints - 1));
        } else {
            grid = bphi::default_lambda_grid(f, r, ntheta, npoints);
        }
        auto sample = bphi::distribution_function(f, r, std::move(grid), ntheta);
        json resp;
        resp["r"] = sample.r;
        resp["ntheta"] = sample.ntheta;
        resp["lambda"] = sample.lambda;
        resp["E"] = sample.E;
        resp["request"] = req;
        return emit(resp, out_json);
    } catch (...) {
        return translate_current_exception();
    }
}

bphi_status bphi_run_expint(const char* request_json, char** out_json) {
    if (!request_json) return fail(BPHI_ERR_ARGUMENT, "null request");
    try {
        json req = json::parse(request_json);
        reject_unknown_keys(req, {"fn", "weight", "r", "gamma", "ntheta", "quadrature"});
        auto f = bphi::AnalyticFunction::parse(req.at("fn").get<std::string>());
        auto w = bphi::Weight::parse(req.at("weight").get<std::string>());
        double r = req.at("r").get<double>();
        double gamma = req.at("gamma").get<double>();
        auto spec = spec_from_request(req);
        int ntheta = req.value("ntheta", spec.ntheta);
        double norm = bphi::bphi_norm(f, w, spec).value;
        double value = bphi::exp_integral(f, w, r, gamma, ntheta, norm);
        json resp;
        resp["value"] = std::isfinite(value) ? json(value) : json("overflow");
        resp["bphi_norm"] = norm;
        resp["request"] = req;
        return emit(resp, out_json);
    } catch (...) {
        return translate_current_exception();
    }
}

bphi_status bphi_run_growth(const char* request_json, char** out_json) {
    if (!request_json) return fail(BPHI_ERR_ARGUMENT, "null request");
    try {
        json req = json::parse(request_json);
        reject_unknown_keys(req, {"fn", "weight", "r", "rays"});
        auto f = bphi::AnalyticFunction::parse(req.at("fn").get<std::string>());
        auto w = bphi::Weight::parse(req.at("weight").get<std::string>());
        double r = req.at("r").get<double>();
        int rays = req.value("rays", 32);
        if (rays < 1) throw bphi::ArgumentError("rays must be >= 1");
        double best = -1.0;
        double best_angle = 0.0;
        json per_ray = json::array();
        for (int j = 0; j < rays; ++j) {
            double ang = 2.0 * std::numbers::pi * j / rays;
            bphi::Complex zeta{std::cos(ang), std::sin(ang)};
            double ratio = bphi::growth_ratio(f, w, zeta, r);
            per_ray.push_back(ratio);
            if (ratio > best) {
                best = ratio;
                best_angle = ang;
            }
        }
        json resp;
        resp["value"] = best;
        resp["argmax_angle"] = best_angle;
        resp["ratios"] = per_ray;
        resp["request"] = req;
        return emit(resp, out_json);
    } catch (...) {
        return translate_current_exception();
    }
}

bphi_status bphi_run_verify(const char* config_json, char** out_json) {
    if (!config_json) return fail(BPHI_ERR_ARGUMENT, "null config");
    try {
        json j = json::parse(config_json);
        std::vector<std::string> theorems;
        if (j.contains("theorems")) {
            theorems = j.at("theorems").get<std::vector<std::string>>();
            j.erase("theorems");
        }
        auto cfg = bphi::RunConfig::from_json_string(j.dump());
        auto summary = bphi::run_verification(cfg, theorems);
        bphi_status status = summary.failed > 0 ? BPHI_ERR_VERIFY : BPHI_OK;
        json resp = json::parse(bphi::summary_json(summary));
        bphi_status emit_status = emit(resp, out_json);
        if (emit_status != BPHI_OK) return emit_status;
        if (status == BPHI_ERR_VERIFY)
            g_last_error = "verification finished with failing checks";
        return status;
    } catch (...) {
        return translate_current_exception();
    }
}

bphi_status bphi_corpus_list(char** out_json) {
    try {
        json arr = bphi::builtin_corpus_labels();
        return emit(arr, out_json);
    } catch (...) {
        return translate_current_exception();
    }
}

void bphi_string_free(char* s) { std::free(s); }

const char* bphi_last_error(void) { return g_last_error.c_str(); }

} // extern "C"
