// Scalar Cauchy-transform objects built on a reflection coefficient:
//
//   kappa(s)      = -(1/2pi) log(1 - s |rho(s)|^2)
//   delta_l(z)    = exp( +i int_{-inf}^{xi} kappa(s)/(s - z) ds )   cut (-inf, xi]
//   delta_r(z)    = exp( -i int_{xi}^{+inf} kappa(s)/(s - z) ds )   cut [xi, +inf)
//   delta_{0l}    = exp( i int_{-inf}^{xi} (kappa(s) - chi_-(s) kappa(xi))/(s - xi) ds )
//   delta_{0r}    = e^{pi kappa(xi)} exp( -i int_{xi}^{inf} (kappa(s) - chi_+(s) kappa(xi))/(s - xi) ds )
//   Delta(z)      = exp( (1/(pi i)) p.v. int kappa(s)/(z - s) ds ),  |Delta| = 1 on R
//   breve_rho(z)  = rho(z)/Delta(z)
//
// with chi_- / chi_+ the indicators of (xi-1, xi) / (xi, xi+1). Jumps across
// the cuts (derived from the formulas, verified numerically):
//   delta_{l,+} = delta_{l,-} (1 - z|rho(z)|^2)      on (-inf, xi)
//   delta_{r,+} = delta_{r,-} (1 - z|rho(z)|^2)^{-1} on (xi, +inf)
//
// Numerics: |rho|^2 is interpolated between the (uniform) grid nodes by a
// cubic B-spline and kappa is the closed-form formula of the interpolant.
// The infinite integrals are truncated at the grid edge +-Z with the analytic
// tail model kappa(s) ~ kappa(+-Z) (Z/s)^2 integrated in closed form
// (consistent with H^{2,2} decay of rho). Near-cut evaluations use the
// subtracted-singularity rule kappa(s) -> kappa(s) - kappa(Re z) plus exact
// complex-log corrections; removable singularities in the delta_0 and Delta
// integrands are regularized the same way.
#pragma once

#include <memory>
#include <vector>

#include "dnls/scattering.hpp"
#include "dnls/types.hpp"

namespace dnls::cauchy {

enum class Side { left, right };

// Cached interpolant of kappa on the rc grid; the free functions below build
// one per call, so hold a KappaFunction when evaluating many points.
class KappaFunction {
public:
    // Requires a uniform, symmetric rc grid and c_margin > 0
    // (throws Error(invalid_argument) / Error(domain)).
    explicit KappaFunction(const scattering::ReflectionCoefficient& rc);

    // kappa(s); |s| > Z uses the tail model kappa(+-Z)(Z/s)^2.
    // Throws Error(domain) if the interpolated margin 1 - s|rho(s)|^2 <= 0.
    double operator()(double s) const;
    double derivative(double s) const;  // d kappa / ds (spline-exact inside)

    double sup_norm() const { return sup_norm_; }
    double z_max() const { return Z_; }
    // Spline lattice (quadrature is segmented at the knots: kappa is only C^2
    // across them, and piecewise-smooth rules converge spectrally per cell).
    double grid_origin() const { return origin_; }
    double grid_step() const { return step_; }
    const std::vector<double>& node_values() const { return node_values_; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    double sup_norm_ = 0.0;
    double Z_ = 0.0;
    double origin_ = 0.0;
    double step_ = 0.0;
    std::vector<double> node_values_;
};

double kappa_eval(const scattering::ReflectionCoefficient& rc, double s);

// delta_{side}(z) for z off the chosen cut; requires dist(z, cut) >= 1e-6
// (nearer evaluations belong to the delta0 (z-xi)^{i kappa} local model).
// Quadrature absolute error target 1e-9; Error(numeric) on non-convergence.
cplx delta_eval(const KappaFunction& kap, double xi, cplx z, Side side);
cplx delta_eval(const scattering::ReflectionCoefficient& rc, double xi, cplx z,
                Side side);

// The regularized phase constants; xi must sit at least 1 inside the grid
// (the chi window (xi -+ 1) must not leave the truncated domain).
cplx delta0_eval(const KappaFunction& kap, double xi, Side side);
cplx delta0_eval(const scattering::ReflectionCoefficient& rc, double xi,
                 Side side);

// Delta(z) at real z strictly inside the grid.
cplx Delta_eval(const KappaFunction& kap, double z);

// rho(z)/Delta(z) at a grid node (z must match a node to 1e-9).
cplx breve_rho(const scattering::ReflectionCoefficient& rc, double z);

// int_a^b kappa(s)/s ds. The s = 0 singularity is removable (kappa has a
// first-order zero there); a and b may be +-HUGE_VAL, in which case the
// kappa(s) ~ kappa(+-Z)(Z/s)^2 tail model is integrated in closed form.
// Feeds the gauge-phase and weak-Plancherel factors
// exp(-(i/pi) int log(1 - s|rho|^2)/s ds) = exp(2i int kappa(s)/s ds).
double kappa_over_s_integral(const KappaFunction& kap, double a, double b);

}  // namespace dnls::cauchy
