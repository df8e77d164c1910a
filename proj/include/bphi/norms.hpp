#pragma once

#include <string>
#include <vector>

#include "bphi/functions.hpp"
#include "bphi/quadrature.hpp"
#include "bphi/weights.hpp"

namespace bphi {

enum class NormKind { bphi, bmoa_garsia, bmo_arc };

std::string to_string(NormKind k);

struct NormEstimate {
    double value = 0.0;
    Complex witness{0.0, 0.0};
    QuadratureSpec spec;
    NormKind kind = NormKind::bphi;
    // |xi| ring -> max objective value on the ring (bmoa_garsia only);
    // lets callers see the plateau/decay towards the cutoff.
    std::vector<std::pair<double, double>> ring_values;
    bool witness_on_cutoff = false;
};

// sup over |z| <= 1-delta of (1-|z|^2)|f'(z)| / phi(1-|z|^2).
NormEstimate bphi_norm(const AnalyticFunction& f, const Weight& w,
                       const QuadratureSpec& spec);

// Garsia-type BMOA norm: sqrt of the sup over xi of the area integral of
// |f'(z)|^2 (1-|z|^2)(1-|xi|^2)/|1-conj(xi) z|^2. The xi search adapts the
// angular node count to the kernel width 1-|xi|.
NormEstimate bmoa_garsia_norm(const DilatedFunction& f, const QuadratureSpec& spec);
NormEstimate bmoa_garsia_norm(const AnalyticFunction& f, const QuadratureSpec& spec);

// Classical mean-oscillation norm over dyadic arcs of the sampled boundary
// values of a dilation (arc lengths down to 4 samples, all rotations by the
// sample pitch).
NormEstimate bmo_arc_norm(const DilatedFunction& f, int ntheta);

struct DistributionSample {
    std::vector<double> lambda; // ascending, nonnegative
    std::vector<double> E;      // fraction of boundary nodes with |f(r zeta)| > lambda
    double r = 0.0;
    int ntheta = 0;
};

// E(lambda) = m(zeta in T : |f(r zeta)| > lambda), strict inequality.
DistributionSample distribution_function(const AnalyticFunction& f, double r,
                                         std::vector<double> lambda_grid, int ntheta);

// Uniform grid on [0, 1.05 * max |f(r zeta)|].
std::vector<double> default_lambda_grid(const AnalyticFunction& f, double r,
                                        int ntheta, int npoints = 2000);

// p * integral lambda^(p-1) E(lambda) dlambda by trapezoid over the grid.
// Emits a warning on stderr if E at the last lambda exceeds 1e-6.
double layer_cake_moment(const DistributionSample& sample, double p);

// Circle integral of exp(gamma |f(r zeta)| / (bphi_norm * sqrt(g(1-r^2)))).
// Returns +inf if any exponent exceeds 700.
double exp_integral(const AnalyticFunction& f, const Weight& w, double r,
                    double gamma, int ntheta, double bphi_norm_value);

struct JnFit {
    double c_hat = 0.0;
    double C_hat = 0.0;
    int points_used = 0;
};

// Least squares ln E(lambda) ~ ln C - (c/norm) lambda over the sub-range
// where 1e-6 < E < 0.5. Throws FitError below 4 usable points.
JnFit estimate_jn_constants(const DistributionSample& sample, double bmoa_norm);

// min |f(rho zeta)| over an n-point grid on [r, (r+1)/2].
double radial_min(const AnalyticFunction& f, Complex zeta, double r, int n);

// |f(r zeta)| / (log|log(1-r)| * sqrt(g(1-r^2))); requires r > 1 - 1/e.
double growth_ratio(const AnalyticFunction& f, const Weight& w, Complex zeta, double r);

struct RayProfile {
    Complex zeta{1.0, 0.0};
    std::vector<double> r;
    std::vector<double> values; // |f(r zeta)|
    std::vector<double> ratios; // growth_ratio at each r
};

} // namespace bphi
