#include "bphi/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <variant>

#include "bphi/errors.hpp"

namespace bphi {

namespace {

struct PowerKind { double alpha; };

struct TableKind {
    std::vector<double> t;
    std::vector<double> log_phi;
};

using Kind = std::variant<PowerKind, TableKind>;

constexpr double kQuadTol = 1e-10;
constexpr int kMaxDepth = 40;

double table_phi(const TableKind& tab, double t) {
    // log-linear in t, constant beyond the end knots
    if (t <= tab.t.front()) return std::exp(tab.log_phi.front());
    if (t >= tab.t.back()) return std::exp(tab.log_phi.back());
    auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
    std::size_t i = static_cast<std::size_t>(it - tab.t.begin());
    double t0 = tab.t[i - 1], t1 = tab.t[i];
    double w = (t - t0) / (t1 - t0);
    return std::exp((1.0 - w) * tab.log_phi[i - 1] + w * tab.log_phi[i]);
}

struct AdaptiveSimpson {
    const std::function<double(double)>& f;
    double tol;

    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, int depth) const {
        double m = 0.5 * (a + b);
        double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        double flm = f(lm), frm = f(rm);
        double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        double err = left + right - whole;
        if (std::abs(err) <= 15.0 * tol || (b - a) < 1e-15)
            return left + right + err / 15.0;
        if (depth >= kMaxDepth)
            throw DivergenceError("adaptive quadrature failed to converge on ["
                                  + std::to_string(a) + "," + std::to_string(b) + "]");
        return recurse(a, m, fa, flm, fm, left, depth + 1)
             + recurse(m, b, fm, frm, fb, right, depth + 1);
    }

    double integrate(double a, double b) const {
        double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
        double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(a, b, fa, fm, fb, whole, 0);
    }
};

} // namespace

struct Weight::Impl {
    Kind kind;
    std::string label;
};

Weight::Weight(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Weight Weight::power(double alpha) {
    if (alpha < 0.0) throw ArgumentError("power weight exponent must be >= 0");
    auto impl = std::make_shared<Impl>();
    impl->kind = PowerKind{alpha};
    std::ostringstream os;
    os << "power:" << alpha;
    impl->label = os.str();
    return Weight(impl);
}

Weight Weight::tabulated(std::vector<std::pair<double, double>> knots, std::string label) {
    if (knots.size() < 2) throw ArgumentError("tabulated weight needs at least 2 knots");
    std::sort(knots.begin(), knots.end());
    TableKind tab;
    for (const auto& [t, v] : knots) {
        if (!(t > 0.0 && t < 1.0))
            throw ArgumentError("tabulated weight knot outside (0,1): t = " + std::to_string(t));
        if (!(v > 0.0))
            throw ArgumentError("tabulated weight must be positive, got phi = "
                                + std::to_string(v) + " at t = " + std::to_string(t));
        if (!tab.t.empty() && t == tab.t.back())
            throw ArgumentError("duplicate knot t = " + std::to_string(t));
        tab.t.push_back(t);
        tab.log_phi.push_back(std::log(v));
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = std::move(tab);
    impl->label = std::move(label);
    return Weight(impl);
}

Weight Weight::parse(const std::string& label) {
    auto colon = label.find(':');
    if (colon == std::string::npos)
        throw ArgumentError("unknown weight label: " + label);
    std::string head = label.substr(0, colon);
    std::string rest = label.substr(colon + 1);
    if (head == "power") {
        try {
            return power(std::stod(rest));
        } catch (const std::invalid_argument&) {
            throw ArgumentError("bad exponent in weight label: " + label);
        }
    }
    if (head == "table") {
        std::ifstream in(rest);
        if (!in) throw ArgumentError("cannot open weight table: " + rest);
        std::vector<std::pair<double, double>> knots;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::string a, b;
            if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
                throw ArgumentError("bad weight table row in " + rest + ": " + line);
            knots.emplace_back(std::stod(a), std::stod(b));
        }
        return tabulated(std::move(knots), label);
    }
    throw ArgumentError("unknown weight label: " + label);
}

double Weight::phi(double t) const {
    if (!(t > 0.0 && t <= 1.0 + 1e-12))
        throw DomainError("phi argument outside (0,1]: t = " + std::to_string(t));
    t = std::min(t, 1.0);
    if (const auto* p = std::get_if<PowerKind>(&impl_->kind))
        return p->alpha == 0.0 ? 1.0 : std::pow(t, p->alpha);
    return table_phi(std::get<TableKind>(impl_->kind), t);
}

double Weight::growth_integral(double x) const {
    if (!(x > 0.0 && x <= 1.0 + 1e-12))
        throw DomainError("growth integral argument outside (0,1]: x = " + std::to_string(x));
    x = std::min(x, 1.0);
    if (const auto* p = std::get_if<PowerKind>(&impl_->kind)) {
        if (p->alpha == 0.0) return -std::log(x);
        return (1.0 - std::pow(x, 2.0 * p->alpha)) / (2.0 * p->alpha);
    }
    const auto& tab = std::get<TableKind>(impl_->kind);
    std::function<double(double)> integrand = [&tab](double t) {
        double v = table_phi(tab, t);
        return v * v / t;
    };
    return AdaptiveSimpson{integrand, kQuadTol}.integrate(x, 1.0);
}

IntegrabilityReport Weight::check_integrable(std::span<const double> probes) const {
    IntegrabilityReport report;
    for (double x : probes) {
        IntegrabilityProbe p;
        p.x = x;
        try {
            p.g = growth_integral(x);
            p.finite = std::isfinite(p.g);
        } catch (const std::exception&) {
            p.g = std::numeric_limits<double>::infinity();
            p.finite = false;
        }
        if (!p.finite) report.all_finite = false;
        report.probes.push_back(p);
    }
    return report;
}

const std::string& Weight::label() const { return impl_->label; }

bool Weight::is_power() const {
    return std::holds_alternative<PowerKind>(impl_->kind);
}

double Weight::power_alpha() const {
    if (const auto* p = std::get_if<PowerKind>(&impl_->kind)) return p->alpha;
    throw ArgumentError("power_alpha on a non-power weight");
}

} // namespace bphi
