#include "bphi/norms.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>

#include "bphi/errors.hpp"

namespace bphi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxKernelTheta = 8192;

void check_circle_point(Complex zeta) {
    if (std::abs(std::abs(zeta) - 1.0) > 1e-12)
        throw ArgumentError("zeta must lie on the unit circle");
}

int pow2_at_least(double x) {
    int n = 8;
    while (n < x && n < kMaxKernelTheta) n <<= 1;
    return n;
}

// Cached |f'|^2 samples on the polar tensor grid, one table per angular
// resolution. The xi search widens ntheta near the cutoff so the kernel's
// angular peak (width ~ 1-|xi|) stays resolved.
class GarsiaObjective {
public:
    GarsiaObjective(std::function<Complex(Complex)> deriv, const QuadratureSpec& spec)
        : deriv_(std::move(deriv)), spec_(spec), rule_(make_disk_rule(spec)) {}

    double operator()(Complex xi) const {
        double s = std::abs(xi);
        int nt = std::max(spec_.ntheta, pow2_at_least(16.0 / std::max(1.0 - s, 1e-12)));
        const Samples& smp = samples(nt);
        double a = xi.real(), b = xi.imag();
        double s2 = s * s;
        double total = 0.0;
        for (std::size_t j = 0; j < rule_.rho.size(); ++j) {
            double rho = rule_.rho[j];
            const double* F = smp.f2.data() + j * static_cast<std::size_t>(nt);
            double inner = 0.0;
            for (int k = 0; k < nt; ++k) {
                double denom = 1.0 - 2.0 * rho * (a * smp.cos_t[static_cast<std::size_t>(k)]
                                                  + b * smp.sin_t[static_cast<std::size_t>(k)])
                             + rho * rho * s2;
                inner += F[k] / denom;
            }
            total += rule_.weight[j] * (1.0 - rho * rho) * inner / nt;
        }
        double v = (1.0 - s2) * total;
        if (!std::isfinite(v))
            throw EvaluationError("Garsia objective non-finite at |xi| = " + std::to_string(s));
        return v;
    }

private:
    struct Samples {
        std::vector<double> f2; // |f'|^2, row-major [radial][angular]
        std::vector<double> cos_t, sin_t;
    };

    const Samples& samples(int nt) const {
        auto it = cache_.find(nt);
        if (it != cache_.end()) return it->second;
        Samples smp;
        smp.cos_t.resize(static_cast<std::size_t>(nt));
        smp.sin_t.resize(static_cast<std::size_t>(nt));
        for (int k = 0; k < nt; ++k) {
            double theta = kTwoPi * k / nt;
            smp.cos_t[static_cast<std::size_t>(k)] = std::cos(theta);
            smp.sin_t[static_cast<std::size_t>(k)] = std::sin(theta);
        }
        smp.f2.resize(rule_.rho.size() * static_cast<std::size_t>(nt));
        for (std::size_t j = 0; j < rule_.rho.size(); ++j) {
            double rho = rule_.rho[j];
            for (int k = 0; k < nt; ++k) {
                Complex z{rho * smp.cos_t[static_cast<std::size_t>(k)],
                          rho * smp.sin_t[static_cast<std::size_t>(k)]};
                Complex d = deriv_(z);
                double f2 = std::norm(d);
                if (!std::isfinite(f2))
                    throw EvaluationError("derivative non-finite inside the disk");
                smp.f2[j * static_cast<std::size_t>(nt) + static_cast<std::size_t>(k)] = f2;
            }
        }
        return cache_.emplace(nt, std::move(smp)).first->second;
    }

    std::function<Complex(Complex)> deriv_;
    QuadratureSpec spec_;
    DiskRule rule_;
    mutable std::map<int, Samples> cache_;
};

NormEstimate garsia_impl(std::function<Complex(Complex)> deriv, const QuadratureSpec& spec) {
    spec.validate();
    GarsiaObjective objective(std::move(deriv), spec);
    const double smax = 1.0 - spec.delta;
    const int ring_angles = 16;

    NormEstimate est;
    est.spec = spec;
    est.kind = NormKind::bmoa_garsia;

    // ring radii 0, 1-2^-m, ..., capped at the cutoff
    std::vector<double> rings = {0.0};
    for (int m = 1;; ++m) {
        double s = 1.0 - std::ldexp(1.0, -m);
        if (s >= smax) break;
        rings.push_back(s);
    }
    rings.push_back(smax);

    double best = -1.0;
    Complex best_xi{0.0, 0.0};
    double best_s = 0.0, best_ang = 0.0;
    auto probe = [&](double s, double ang) {
        s = std::clamp(s, 0.0, smax);
        Complex xi{s * std::cos(ang), s * std::sin(ang)};
        double v = objective(xi);
        if (v > best) {
            best = v;
            best_xi = xi;
            best_s = s;
            best_ang = ang;
        }
        return v;
    };

    for (double s : rings) {
        double ring_max = 0.0;
        int nang = s == 0.0 ? 1 : ring_angles;
        for (int k = 0; k < nang; ++k)
            ring_max = std::max(ring_max, probe(s, kTwoPi * k / nang));
        est.ring_values.emplace_back(s, ring_max);
    }

    double pitch_s = smax / ring_angles;
    double pitch_a = kTwoPi / ring_angles;
    for (int level = 1; level <= spec.refine; ++level) {
        pitch_s *= 0.5;
        pitch_a *= 0.5;
        double cs = best_s, ca = best_ang;
        for (int ds = -2; ds <= 2; ++ds)
            for (int da = -2; da <= 2; ++da) {
                if (ds == 0 && da == 0) continue;
                probe(cs + ds * pitch_s, ca + da * pitch_a);
            }
    }

    est.value = std::sqrt(std::max(best, 0.0));
    est.witness = best_xi;
    est.witness_on_cutoff = best_s >= smax - 1e-12;
    if (est.witness_on_cutoff)
        std::cerr << "warning: Garsia sup attained on the xi cutoff ring (|xi| = "
                  << best_s << "); value may be cutoff-biased\n";
    return est;
}

} // namespace

std::string to_string(NormKind k) {
    switch (k) {
        case NormKind::bphi: return "bphi";
        case NormKind::bmoa_garsia: return "bmoa_garsia";
        case NormKind::bmo_arc: return "bmo_arc";
    }
    return "?";
}

NormEstimate bphi_norm(const AnalyticFunction& f, const Weight& w,
                       const QuadratureSpec& spec) {
    spec.validate();
    auto objective = [&](Complex z) {
        double t = 1.0 - std::norm(z);
        return t * std::abs(f.deriv(z)) / w.phi(t);
    };
    SupResult sup = sup_search(objective, spec);
    NormEstimate est;
    est.value = sup.value;
    est.witness = sup.argpoint;
    est.spec = spec;
    est.kind = NormKind::bphi;
    return est;
}

NormEstimate bmoa_garsia_norm(const DilatedFunction& f, const QuadratureSpec& spec) {
    return garsia_impl([f](Complex z) { return f.deriv(z); }, spec);
}

NormEstimate bmoa_garsia_norm(const AnalyticFunction& f, const QuadratureSpec& spec) {
    return garsia_impl([f](Complex z) { return f.deriv(z); }, spec);
}

NormEstimate bmo_arc_norm(const DilatedFunction& f, int ntheta) {
    if (ntheta < 8) throw ArgumentError("bmo_arc_norm needs ntheta >= 8");
    std::vector<Complex> samples(static_cast<std::size_t>(ntheta));
    for (int k = 0; k < ntheta; ++k) {
        double theta = kTwoPi * k / ntheta;
        samples[static_cast<std::size_t>(k)] = f.eval(Complex{std::cos(theta), std::sin(theta)});
    }

    double best = 0.0;
    int best_start = 0, best_len = ntheta;
    for (int len = ntheta; len >= 4; len /= 2) {
        int noffsets = len == ntheta ? 1 : ntheta;
        for (int start = 0; start < noffsets; ++start) {
            Complex mean{0.0, 0.0};
            for (int i = 0; i < len; ++i)
                mean += samples[static_cast<std::size_t>((start + i) % ntheta)];
            mean /= static_cast<double>(len);
            double osc = 0.0;
            for (int i = 0; i < len; ++i)
                osc += std::abs(samples[static_cast<std::size_t>((start + i) % ntheta)] - mean);
            osc /= len;
            if (osc > best) {
                best = osc;
                best_start = start;
                best_len = len;
            }
        }
    }

    NormEstimate est;
    est.value = best;
    double mid = kTwoPi * (best_start + 0.5 * (best_len - 1)) / ntheta;
    est.witness = Complex{std::cos(mid), std::sin(mid)};
    est.spec.ntheta = ntheta;
    est.kind = NormKind::bmo_arc;
    return est;
}

DistributionSample distribution_function(const AnalyticFunction& f, double r,
                                         std::vector<double> lambda_grid, int ntheta) {
    if (!(r > 0.0 && r < 1.0)) throw ArgumentError("distribution_function needs r in (0,1)");
    if (ntheta < 1) throw ArgumentError("ntheta must be >= 1");
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        if (lambda_grid[i] < 0.0) throw ArgumentError("lambda grid must be nonnegative");
        if (i > 0 && lambda_grid[i] < lambda_grid[i - 1])
            throw ArgumentError("lambda grid must be ascending");
    }
    std::vector<double> moduli(static_cast<std::size_t>(ntheta));
    for (int k = 0; k < ntheta; ++k) {
        double theta = kTwoPi * k / ntheta;
        moduli[static_cast<std::size_t>(k)] =
            std::abs(f.eval(r * Complex{std::cos(theta), std::sin(theta)}));
    }
    std::sort(moduli.begin(), moduli.end());
    DistributionSample sample;
    sample.r = r;
    sample.ntheta = ntheta;
    sample.E.reserve(lambda_grid.size());
    for (double lambda : lambda_grid) {
        // strict inequality |f| > lambda
        auto it = std::upper_bound(moduli.begin(), moduli.end(), lambda);
        sample.E.push_back(static_cast<double>(moduli.end() - it) / ntheta);
    }
    sample.lambda = std::move(lambda_grid);
    return sample;
}

std::vector<double> default_lambda_grid(const AnalyticFunction& f, double r,
                                        int ntheta, int npoints) {
    if (npoints < 2) throw ArgumentError("lambda grid needs at least 2 points");
    double maxmod = 0.0;
    for (int k = 0; k < ntheta; ++k) {
        double theta = kTwoPi * k / ntheta;
        maxmod = std::max(maxmod, std::abs(f.eval(r * Complex{std::cos(theta), std::sin(theta)})));
    }
    double top = 1.05 * maxmod;
    std::vector<double> grid(static_cast<std::size_t>(npoints));
    for (int i = 0; i < npoints; ++i)
        grid[static_cast<std::size_t>(i)] = top * i / (npoints - 1);
    return grid;
}

double layer_cake_moment(const DistributionSample& sample, double p) {
    if (!(p > 0.0)) throw ArgumentError("layer cake moment needs p > 0");
    if (sample.lambda.size() < 2) throw ArgumentError("lambda grid too short");
    if (sample.E.back() > 1e-6)
        std::cerr << "warning: E at the last lambda is " << sample.E.back()
                  << "; lambda grid may be too short\n";
    // E piecewise linear between nodes, lambda^(p-1) integrated exactly;
    // handles the p < 1 endpoint singularity as well.
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < sample.lambda.size(); ++i) {
        double l0 = sample.lambda[i], l1 = sample.lambda[i + 1];
        if (l1 <= l0) continue;
        double e0 = sample.E[i], e1 = sample.E[i + 1];
        double slope = (e1 - e0) / (l1 - l0);
        double a = e0 - slope * l0;
        double dp = std::pow(l1, p) - std::pow(l0, p);
        double dp1 = std::pow(l1, p + 1.0) - std::pow(l0, p + 1.0);
        total += a * dp + slope * p / (p + 1.0) * dp1;
    }
    return total;
}

double exp_integral(const AnalyticFunction& f, const Weight& w, double r,
                    double gamma, int ntheta, double bphi_norm_value) {
    if (!(r > 0.0 && r < 1.0)) throw ArgumentError("exp_integral needs r in (0,1)");
    if (gamma < 0.0) throw ArgumentError("exp_integral needs gamma >= 0");
    if (!f.vanishes_at_zero()) throw ArgumentError("exp_integral requires f(0) = 0");
    if (!(bphi_norm_value > 0.0)) throw ArgumentError("exp_integral needs a positive norm");
    double envelope = bphi_norm_value * std::sqrt(w.growth_integral(1.0 - r * r));
    double sum = 0.0;
    for (int k = 0; k < ntheta; ++k) {
        double theta = kTwoPi * k / ntheta;
        double v = std::abs(f.eval(r * Complex{std::cos(theta), std::sin(theta)}));
        double expo = gamma * v / envelope;
        if (expo > 700.0) return std::numeric_limits<double>::infinity();
        sum += std::exp(expo);
    }
    return sum / ntheta;
}

JnFit estimate_jn_constants(const DistributionSample& sample, double bmoa_norm) {
    if (!(bmoa_norm > 0.0)) throw ArgumentError("estimate_jn_constants needs a positive norm");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < sample.lambda.size(); ++i) {
        if (sample.E[i] > 1e-6 && sample.E[i] < 0.5) {
            xs.push_back(sample.lambda[i]);
            ys.push_back(std::log(sample.E[i]));
        }
    }
    if (xs.size() < 4)
        throw FitError("fewer than 4 usable points for the tail fit");
    double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    JnFit fit;
    fit.c_hat = -slope * bmoa_norm;
    fit.C_hat = std::exp(intercept);
    fit.points_used = static_cast<int>(xs.size());
    return fit;
}

double radial_min(const AnalyticFunction& f, Complex zeta, double r, int n) {
    check_circle_point(zeta);
    if (!(r > 0.0 && r < 1.0)) throw ArgumentError("radial_min needs r in (0,1)");
    if (n < 16) throw ArgumentError("radial_min needs at least 16 sample points");
    double hi = 0.5 * (r + 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double rho = r + (hi - r) * i / (n - 1);
        best = std::min(best, std::abs(f.eval(rho * zeta)));
    }
    return best;
}

double growth_ratio(const AnalyticFunction& f, const Weight& w, Complex zeta, double r) {
    check_circle_point(zeta);
    double threshold = 1.0 - std::exp(-1.0);
    if (!(r > threshold && r < 1.0))
        throw DomainError("growth_ratio needs r in (1 - 1/e, 1)");
    double loglog = std::log(std::abs(std::log(1.0 - r)));
    double envelope = loglog * std::sqrt(w.growth_integral(1.0 - r * r));
    return std::abs(f.eval(r * zeta)) / envelope;
}

} // namespace bphi
