#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "bphi/functions.hpp"

namespace bphi {

enum class RadialRule { GaussLegendre, Midpoint };

struct QuadratureSpec {
    int ntheta = 256;      // angular nodes, >= 8
    int nrho = 128;        // radial nodes, >= 4
    RadialRule radial_rule = RadialRule::GaussLegendre;
    double delta = 1e-3;   // boundary cutoff for sup/xi searches
    int refine = 3;        // local refinement levels

    void validate() const; // throws ArgumentError

    std::string to_json_string() const;
    static QuadratureSpec from_json_string(const std::string& s);
};

struct SupResult {
    double value = 0.0;
    Complex argpoint{0.0, 0.0};
    int coarse_radii = 0;
    int coarse_angles = 0;
    int levels = 0;
};

// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Radial part of the normalized-area disk rule: nodes rho_j with weights
// w_j containing the 2*rho Jacobian, rescaled so sum(w_j) == 1 exactly.
struct DiskRule {
    std::vector<double> rho;
    std::vector<double> weight;
    int ntheta = 0;
};
DiskRule make_disk_rule(const QuadratureSpec& spec);

// Trapezoid rule on equispaced circle nodes; spectrally accurate for
// smooth periodic integrands. Normalized so h == 1 gives 1.
double integrate_circle(const std::function<double(Complex)>& h, int ntheta);
Complex integrate_circle_c(const std::function<Complex(Complex)>& h, int ntheta);

// Integral over the disk against normalized area measure.
double integrate_disk(const std::function<double(Complex)>& h, const QuadratureSpec& spec);

// Coarse polar grid on |z| <= 1-delta followed by `refine` levels of local
// 5x5 refinement with halved pitch around the running best. Deterministic:
// first-found node wins ties, scan order is radius-major from angle 0.
SupResult sup_search(const std::function<double(Complex)>& objective,
                     const QuadratureSpec& spec);

// Same Gauss-Legendre rule mapped affinely onto [a,b].
double integrate_interval(const std::function<double(double)>& h,
                          double a, double b, int n);

} // namespace bphi
