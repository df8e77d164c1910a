#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bphi {

struct IntegrabilityProbe {
    double x = 0.0;
    double g = 0.0;
    bool finite = false;
};

struct IntegrabilityReport {
    std::vector<IntegrabilityProbe> probes;
    bool all_finite = true;
};

// Weight phi(t) on (0,1] together with its growth integral
// g(x) = integral_x^1 phi^2(t)/t dt.  Power weights use closed forms,
// tabulated weights interpolate log-linearly and integrate adaptively.
class Weight {
public:
    static Weight power(double alpha);
    static Weight tabulated(std::vector<std::pair<double, double>> knots,
                            std::string label = "table");
    // "power:<alpha>" or "table:<csv path>" (rows t,phi).
    static Weight parse(const std::string& label);

    double phi(double t) const;
    double growth_integral(double x) const;
    IntegrabilityReport check_integrable(std::span<const double> probes) const;

    const std::string& label() const;
    bool is_power() const;
    double power_alpha() const; // only valid when is_power()

private:
    struct Impl;
    explicit Weight(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

} // namespace bphi
