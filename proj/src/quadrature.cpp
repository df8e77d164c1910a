#include "bphi/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bphi/errors.hpp"
#include "json.hpp"

namespace bphi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double v, Complex z, const char* what) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << what << " is non-finite at z = " << z.real() << "+" << z.imag() << "i";
        throw EvaluationError(os.str());
    }
}

} // namespace

void QuadratureSpec::validate() const {
    if (ntheta < 8) throw ArgumentError("ntheta must be >= 8");
    if (nrho < 4) throw ArgumentError("nrho must be >= 4");
    if (!(delta > 0.0 && delta < 0.5)) throw ArgumentError("delta must lie in (0, 0.5)");
    if (refine < 0) throw ArgumentError("refine must be >= 0");
}

std::string QuadratureSpec::to_json_string() const {
    nlohmann::json j;
    j["ntheta"] = ntheta;
    j["nrho"] = nrho;
    j["radial_rule"] = radial_rule == RadialRule::GaussLegendre ? "gauss-legendre" : "midpoint";
    j["delta"] = delta;
    j["refine"] = refine;
    return j.dump();
}

QuadratureSpec QuadratureSpec::from_json_string(const std::string& s) {
    nlohmann::json j = nlohmann::json::parse(s);
    QuadratureSpec spec;
    if (j.contains("ntheta")) spec.ntheta = j.at("ntheta").get<int>();
    if (j.contains("nrho")) spec.nrho = j.at("nrho").get<int>();
    if (j.contains("delta")) spec.delta = j.at("delta").get<double>();
    if (j.contains("refine")) spec.refine = j.at("refine").get<int>();
    if (j.contains("radial_rule")) {
        auto rule = j.at("radial_rule").get<std::string>();
        if (rule == "gauss-legendre") spec.radial_rule = RadialRule::GaussLegendre;
        else if (rule == "midpoint") spec.radial_rule = RadialRule::Midpoint;
        else throw ArgumentError("unknown radial rule: " + rule);
    }
    spec.validate();
    return spec;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw ArgumentError("gauss_legendre_01 needs n >= 1");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    // Newton iteration on P_n over [-1,1], then affine map to [0,1].
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x); // descending x -> ascending node
        nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
        weights[static_cast<std::size_t>(i)] = 0.5 * w;
        weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
    }
}

DiskRule make_disk_rule(const QuadratureSpec& spec) {
    spec.validate();
    DiskRule rule;
    rule.ntheta = spec.ntheta;
    std::vector<double> x, v;
    if (spec.radial_rule == RadialRule::GaussLegendre) {
        gauss_legendre_01(spec.nrho, x, v);
    } else {
        x.resize(static_cast<std::size_t>(spec.nrho));
        v.assign(static_cast<std::size_t>(spec.nrho), 1.0 / spec.nrho);
        for (int j = 0; j < spec.nrho; ++j)
            x[static_cast<std::size_t>(j)] = (j + 0.5) / spec.nrho;
    }
    rule.rho = x;
    rule.weight.resize(x.size());
    double total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        rule.weight[j] = 2.0 * x[j] * v[j];
        total += rule.weight[j];
    }
    // exact normalization: constant 1 integrates to 1
    for (auto& w : rule.weight) w /= total;
    return rule;
}

double integrate_circle(const std::function<double(Complex)>& h, int ntheta) {
    if (ntheta < 1) throw ArgumentError("ntheta must be >= 1");
    double sum = 0.0;
    for (int k = 0; k < ntheta; ++k) {
        double theta = kTwoPi * k / ntheta;
        Complex zeta{std::cos(theta), std::sin(theta)};
        double v = h(zeta);
        require_finite(v, zeta, "circle integrand");
        sum += v;
    }
    return sum / ntheta;
}

Complex integrate_circle_c(const std::function<Complex(Complex)>& h, int ntheta) {
    if (ntheta < 1) throw ArgumentError("ntheta must be >= 1");
    Complex sum{0.0, 0.0};
    for (int k = 0; k < ntheta; ++k) {
        double theta = kTwoPi * k / ntheta;
        Complex zeta{std::cos(theta), std::sin(theta)};
        Complex v = h(zeta);
        require_finite(v.real(), zeta, "circle integrand");
        require_finite(v.imag(), zeta, "circle integrand");
        sum += v;
    }
    return sum / static_cast<double>(ntheta);
}

double integrate_disk(const std::function<double(Complex)>& h, const QuadratureSpec& spec) {
    DiskRule rule = make_disk_rule(spec);
    double total = 0.0;
    for (std::size_t j = 0; j < rule.rho.size(); ++j) {
        double rho = rule.rho[j];
        double inner = 0.0;
        for (int k = 0; k < rule.ntheta; ++k) {
            double theta = kTwoPi * k / rule.ntheta;
            Complex z{rho * std::cos(theta), rho * std::sin(theta)};
            double v = h(z);
            require_finite(v, z, "disk integrand");
            inner += v;
        }
        total += rule.weight[j] * inner / rule.ntheta;
    }
    return total;
}

SupResult sup_search(const std::function<double(Complex)>& objective,
                     const QuadratureSpec& spec) {
    spec.validate();
    const double rmax = 1.0 - spec.delta;
    SupResult best;
    best.coarse_radii = spec.nrho;
    best.coarse_angles = spec.ntheta;
    best.levels = spec.refine;

    double best_rad = 0.0, best_ang = 0.0;
    auto probe = [&](double rad, double ang, bool first) {
        rad = std::clamp(rad, 0.0, rmax);
        Complex z{rad * std::cos(ang), rad * std::sin(ang)};
        double v = objective(z);
        require_finite(v, z, "sup-search objective");
        if (first || v > best.value) {
            best.value = v;
            best.argpoint = z;
            best_rad = rad;
            best_ang = ang;
        }
    };

    probe(0.0, 0.0, true);
    for (int i = 1; i <= spec.nrho; ++i) {
        double rad = rmax * i / spec.nrho;
        for (int k = 0; k < spec.ntheta; ++k)
            probe(rad, kTwoPi * k / spec.ntheta, false);
    }

    double pitch_r = rmax / spec.nrho;
    double pitch_a = kTwoPi / spec.ntheta;
    for (int level = 1; level <= spec.refine; ++level) {
        pitch_r *= 0.5;
        pitch_a *= 0.5;
        double cr = best_rad, ca = best_ang;
        for (int dr = -2; dr <= 2; ++dr)
            for (int da = -2; da <= 2; ++da) {
                if (dr == 0 && da == 0) continue;
                probe(cr + dr * pitch_r, ca + da * pitch_a, false);
            }
    }
    return best;
}

double integrate_interval(const std::function<double(double)>& h,
                          double a, double b, int n) {
    std::vector<double> x, w;
    gauss_legendre_01(n, x, w);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = a + (b - a) * x[i];
        double v = h(t);
        if (!std::isfinite(v))
            throw EvaluationError("interval integrand non-finite at t = " + std::to_string(t));
        sum += w[i] * v;
    }
    return (b - a) * sum;
}

} // namespace bphi
