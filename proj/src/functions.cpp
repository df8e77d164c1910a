#include "bphi/functions.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

#include "bphi/errors.hpp"

namespace bphi {

namespace {

struct Monomial { int n; };
struct PowerSeries { std::vector<Complex> a; };
struct LogOneMinusZ {};
struct LogSquaredOneMinusZ {};
struct Lacunary { int depth; };
struct Scaled {
    std::shared_ptr<const AnalyticFunction> inner;
    Complex factor;
};

using Kind = std::variant<Monomial, PowerSeries, LogOneMinusZ,
                          LogSquaredOneMinusZ, Lacunary, Scaled>;

Complex int_pow(Complex z, int n) {
    Complex result{1.0, 0.0};
    Complex base = z;
    for (int e = n; e > 0; e >>= 1) {
        if (e & 1) result *= base;
        base *= base;
    }
    return result;
}

} // namespace

struct AnalyticFunction::Impl {
    Kind kind;
    std::string label;
    bool singular = false; // log(1-z) family: needs |z| < 1
};

AnalyticFunction::AnalyticFunction(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

AnalyticFunction AnalyticFunction::monomial(int degree) {
    if (degree < 0) throw ArgumentError("monomial degree must be >= 0");
    auto impl = std::make_shared<Impl>();
    impl->kind = Monomial{degree};
    impl->label = "mono:" + std::to_string(degree);
    return AnalyticFunction(impl);
}

AnalyticFunction AnalyticFunction::power_series(std::vector<Complex> coefficients,
                                                std::string label) {
    if (coefficients.empty()) throw ArgumentError("power series needs coefficients");
    auto impl = std::make_shared<Impl>();
    impl->kind = PowerSeries{std::move(coefficients)};
    impl->label = std::move(label);
    return AnalyticFunction(impl);
}

AnalyticFunction AnalyticFunction::log_one_minus_z() {
    auto impl = std::make_shared<Impl>();
    impl->kind = LogOneMinusZ{};
    impl->label = "log1mz";
    impl->singular = true;
    return AnalyticFunction(impl);
}

AnalyticFunction AnalyticFunction::log_squared_one_minus_z() {
    auto impl = std::make_shared<Impl>();
    impl->kind = LogSquaredOneMinusZ{};
    impl->label = "log2_1mz";
    impl->singular = true;
    return AnalyticFunction(impl);
}

AnalyticFunction AnalyticFunction::lacunary(int depth) {
    if (depth < 1) throw ArgumentError("lacunary depth must be >= 1");
    auto impl = std::make_shared<Impl>();
    impl->kind = Lacunary{depth};
    impl->label = "lacunary:" + std::to_string(depth);
    return AnalyticFunction(impl);
}

AnalyticFunction AnalyticFunction::scaled(AnalyticFunction inner, Complex factor) {
    auto impl = std::make_shared<Impl>();
    impl->singular = inner.singular_on_circle();
    std::ostringstream os;
    os << "scale:" << factor.real();
    if (factor.imag() != 0.0) os << "," << factor.imag();
    os << ":" << inner.label();
    impl->label = os.str();
    impl->kind = Scaled{std::make_shared<AnalyticFunction>(std::move(inner)), factor};
    return AnalyticFunction(impl);
}

namespace {

std::vector<Complex> load_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open series file: " + path);
    std::vector<Complex> coeffs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string cell;
        double vals[3] = {0.0, 0.0, 0.0};
        int ncell = 0;
        while (std::getline(ls, cell, ',') && ncell < 3) {
            vals[ncell++] = std::stod(cell);
        }
        if (ncell < 2) throw ArgumentError("bad series row in " + path + ": " + line);
        auto idx = static_cast<std::size_t>(vals[0]);
        if (idx >= coeffs.size()) coeffs.resize(idx + 1, Complex{0.0, 0.0});
        coeffs[idx] = Complex{vals[1], ncell > 2 ? vals[2] : 0.0};
    }
    if (coeffs.empty()) throw ArgumentError("empty series file: " + path);
    return coeffs;
}

} // namespace

AnalyticFunction AnalyticFunction::parse(const std::string& label) {
    if (label == "log1mz") return log_one_minus_z();
    if (label == "log2_1mz") return log_squared_one_minus_z();
    auto colon = label.find(':');
    if (colon == std::string::npos)
        throw ArgumentError("unknown function label: " + label);
    std::string head = label.substr(0, colon);
    std::string rest = label.substr(colon + 1);
    try {
        if (head == "mono") return monomial(std::stoi(rest));
        if (head == "lacunary") return lacunary(std::stoi(rest));
        if (head == "series") return power_series(load_series_csv(rest), label);
        if (head == "scale") {
            auto sep = rest.find(':');
            if (sep == std::string::npos)
                throw ArgumentError("scale label needs scale:<c>:<inner>: " + label);
            std::string cpart = rest.substr(0, sep);
            double re = 0.0, im = 0.0;
            auto comma = cpart.find(',');
            if (comma == std::string::npos) {
                re = std::stod(cpart);
            } else {
                re = std::stod(cpart.substr(0, comma));
                im = std::stod(cpart.substr(comma + 1));
            }
            return scaled(parse(rest.substr(sep + 1)), Complex{re, im});
        }
    } catch (const std::invalid_argument&) {
        throw ArgumentError("bad numeric field in function label: " + label);
    } catch (const std::out_of_range&) {
        throw ArgumentError("numeric field out of range in function label: " + label);
    }
    throw ArgumentError("unknown function label: " + label);
}

namespace {

void check_disk_point(Complex z, bool singular) {
    double a = std::abs(z);
    if (a > 1.0 + 1e-12)
        throw DomainError("point outside the closed unit disk: |z| = " + std::to_string(a));
    if (singular && a >= 1.0)
        throw DomainError("function is singular on the circle; need |z| < 1");
}

struct EvalVisitor {
    Complex z;
    Complex operator()(const Monomial& m) const { return int_pow(z, m.n); }
    Complex operator()(const PowerSeries& s) const {
        Complex acc{0.0, 0.0};
        for (auto it = s.a.rbegin(); it != s.a.rend(); ++it) acc = acc * z + *it;
        return acc;
    }
    Complex operator()(const LogOneMinusZ&) const { return std::log(Complex{1.0, 0.0} - z); }
    Complex operator()(const LogSquaredOneMinusZ&) const {
        Complex l = std::log(Complex{1.0, 0.0} - z);
        return l * l;
    }
    Complex operator()(const Lacunary& l) const {
        Complex sum{0.0, 0.0};
        Complex p = z; // z^(2^k)
        for (int k = 0; k < l.depth; ++k) {
            sum += p;
            p *= p;
        }
        return sum;
    }
    Complex operator()(const Scaled& s) const { return s.factor * s.inner->eval(z); }
};

struct DerivVisitor {
    Complex z;
    Complex operator()(const Monomial& m) const {
        if (m.n == 0) return Complex{0.0, 0.0};
        return static_cast<double>(m.n) * int_pow(z, m.n - 1);
    }
    Complex operator()(const PowerSeries& s) const {
        Complex acc{0.0, 0.0};
        for (std::size_t i = s.a.size(); i-- > 1;)
            acc = acc * z + static_cast<double>(i) * s.a[i];
        return acc;
    }
    Complex operator()(const LogOneMinusZ&) const {
        return Complex{-1.0, 0.0} / (Complex{1.0, 0.0} - z);
    }
    Complex operator()(const LogSquaredOneMinusZ&) const {
        Complex omz = Complex{1.0, 0.0} - z;
        return -2.0 * std::log(omz) / omz;
    }
    Complex operator()(const Lacunary& l) const {
        if (z == Complex{0.0, 0.0}) return Complex{1.0, 0.0}; // only the linear term survives
        Complex sum{0.0, 0.0};
        Complex p = z; // z^(2^k)
        double e = 1.0;
        for (int k = 0; k < l.depth; ++k) {
            sum += e * p / z;
            p *= p;
            e *= 2.0;
        }
        return sum;
    }
    Complex operator()(const Scaled& s) const { return s.factor * s.inner->deriv(z); }
};

} // namespace

Complex AnalyticFunction::eval(Complex z) const {
    check_disk_point(z, impl_->singular);
    return std::visit(EvalVisitor{z}, impl_->kind);
}

Complex AnalyticFunction::deriv(Complex z) const {
    check_disk_point(z, impl_->singular);
    return std::visit(DerivVisitor{z}, impl_->kind);
}

const std::string& AnalyticFunction::label() const { return impl_->label; }

bool AnalyticFunction::singular_on_circle() const { return impl_->singular; }

bool AnalyticFunction::vanishes_at_zero() const {
    return eval(Complex{0.0, 0.0}) == Complex{0.0, 0.0};
}

DilatedFunction::DilatedFunction(AnalyticFunction base, double r)
    : base_(std::move(base)), r_(r) {
    if (!(r > 0.0 && r < 1.0))
        throw ArgumentError("dilation radius must lie in (0,1), got " + std::to_string(r));
}

Complex DilatedFunction::eval(Complex z) const {
    if (std::abs(z) > 1.0 + 1e-12)
        throw DomainError("dilation evaluated outside the closed disk");
    return base_.eval(r_ * z);
}

Complex DilatedFunction::deriv(Complex z) const {
    if (std::abs(z) > 1.0 + 1e-12)
        throw DomainError("dilation evaluated outside the closed disk");
    return r_ * base_.deriv(r_ * z);
}

std::string DilatedFunction::label() const {
    std::ostringstream os;
    os << base_.label() << "@r=" << r_;
    return os.str();
}

DilatedFunction dilate(const AnalyticFunction& f, double r) {
    return DilatedFunction(f, r);
}

std::vector<std::string> builtin_corpus_labels() {
    return {"mono:1", "mono:2", "log1mz", "log2_1mz", "lacunary:16"};
}

} // namespace bphi
