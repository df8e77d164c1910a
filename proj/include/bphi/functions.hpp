#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace bphi {

using Complex = std::complex<double>;

// Analytic test function on the unit disk with exact evaluation and exact
// closed-form derivative. Immutable; cheap to copy (shared impl).
class AnalyticFunction {
public:
    static AnalyticFunction monomial(int degree);
    static AnalyticFunction power_series(std::vector<Complex> coefficients,
                                         std::string label = "series");
    static AnalyticFunction log_one_minus_z();
    static AnalyticFunction log_squared_one_minus_z();
    // Sum of z^(2^k), k = 0..depth-1.
    static AnalyticFunction lacunary(int depth);
    static AnalyticFunction scaled(AnalyticFunction inner, Complex factor);

    // Labels: "mono:<n>", "log1mz", "log2_1mz", "lacunary:<K>",
    // "series:<csv path>", "scale:<re>[,<im>]:<inner label>".
    static AnalyticFunction parse(const std::string& label);

    Complex eval(Complex z) const;
    Complex deriv(Complex z) const;

    const std::string& label() const;
    // True for the log(1-z) family: evaluation requires |z| < 1.
    bool singular_on_circle() const;
    bool vanishes_at_zero() const;

private:
    struct Impl;
    explicit AnalyticFunction(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

// f_r(z) = f(rz), analytic on the closed disk for r < 1.
class DilatedFunction {
public:
    DilatedFunction(AnalyticFunction base, double r);

    Complex eval(Complex z) const;
    Complex deriv(Complex z) const;

    double radius() const { return r_; }
    const AnalyticFunction& base() const { return base_; }
    std::string label() const;

private:
    AnalyticFunction base_;
    double r_;
};

DilatedFunction dilate(const AnalyticFunction& f, double r);

// Built-in corpus labels understood by AnalyticFunction::parse.
std::vector<std::string> builtin_corpus_labels();

} // namespace bphi
