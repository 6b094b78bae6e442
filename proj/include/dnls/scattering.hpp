// Direct scattering for the Kaup-Newell spectral problem
//
//   Psi' = -i zeta^2 sigma3 Psi + zeta Q(x) Psi + P(x) Psi,
//   Q = offdiag(q, qbar),  P = (i/2) diag(-|q|^2, +|q|^2),
//
// normalized by Psi^{+-} e^{i x zeta^2 sigma3} -> I as x -> +-inf. The
// transition matrix T (Psi^+ = Psi^- T) carries a, b, abreve, bbreve with
// a abreve - b bbreve = 1. On the real z-line (z = zeta^2) the reflection
// coefficient is rho(z) = zeta^{-1} bbreve(zeta) / a(zeta), with the
// representative zeta = sqrt(z) for z > 0 and zeta = i sqrt(-z) for z < 0.
//
// Numerics: the oscillation-removed variable Y = Psi e^{i x zeta^2 sigma3}
// satisfies Y' = -i zeta^2 [sigma3, Y] + (zeta Q + P) Y, so the stiff phase
// e^{-2 i x zeta^2} only appears in off-diagonal couplings and adaptive steps
// stay O(1) in zeta for moderate |zeta^2|. Integration is an adaptive
// Dormand-Prince 5(4) with the sampled potential interpolated by a cubic
// B-spline (O(h^4) on the uniform grid).
//
// JSON schema (serialize/deserialize round-trip):
//   Potential:             {"type":"potential","x_min":..,"x_max":..,"n":..,
//                           "tail_tol":..,"samples":[[re,im],...]}
//   ReflectionCoefficient: {"type":"reflection","z_grid":[..],
//                           "rho":[[re,im],...],"c_margin":..,
//                           "soliton_suspect":..}
#pragma once

#include <string>
#include <vector>

#include "dnls/types.hpp"

namespace dnls::scattering {

struct Potential {
    std::vector<cplx> samples;  // q0 at n uniform nodes on [x_min, x_max]
    double x_min = 0.0;
    double x_max = 0.0;
    int n = 0;
    double tail_tol = 1e-10;

    // Validates n >= 2, x_min < x_max, sample count, and tail smallness
    // max(|q(x_min)|, |q(x_max)|) <= tail_tol (the truncation proxy for
    // whole-line decay). Throws Error(invalid_argument).
    static Potential create(std::vector<cplx> samples, double x_min,
                            double x_max, double tail_tol = 1e-10);

    // Convenience: sample a callable on a uniform grid.
    template <typename F>
    static Potential sample(F&& f, double x_min, double x_max, int n,
                            double tail_tol = 1e-10) {
        std::vector<cplx> s(static_cast<size_t>(n));
        const double h = (x_max - x_min) / (n - 1);
        for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] = f(x_min + h * i);
        return create(std::move(s), x_min, x_max, tail_tol);
    }
};

struct TransitionSample {
    cplx zeta;
    cplx a, b, a_breve, b_breve;
};

struct ReflectionCoefficient {
    std::vector<double> z_grid;  // strictly increasing, symmetric about 0
    std::vector<cplx> rho;
    double c_margin = 1.0;          // min over grid of 1 - z |rho(z)|^2
    bool soliton_suspect = false;   // c_margin <= 0 (flagged, not rejected)
};

struct SolitonFreeReport {
    double c_margin = 1.0;
    int winding = 0;        // of a(zeta) along a contour in {Im zeta^2 < 0}
    double min_abs_a = 0.0; // smallest |a| seen on the contour
    bool inconclusive = false;  // min_abs_a < wind_tol
};

struct ScatterOptions {
    double ode_tol = 1e-10;   // local error tolerance of the integrator
    double det_tol = 1e-8;    // |a abreve - b bbreve - 1| acceptance
    // Winding contour: rectangle [-Z, Z] x [-i contour_depth, -i contour_eps]
    // in the z = zeta^2 plane (Z from the reflection grid), sampled at
    // contour_samples points total.
    double contour_depth = 1.5;
    double contour_eps = 0.05;
    int contour_samples = 1024;
    double wind_tol = 1e-3;
};

// One transition-matrix solve at a spectral point on Sigma (Im zeta^2 = 0,
// i.e. zeta real or purely imaginary; throws Error(invalid_argument)
// otherwise). Throws Error(numeric) on step underflow and
// Error(consistency) if the determinant relation fails beyond det_tol.
TransitionSample jost_transition(const Potential& q, cplx zeta,
                                 const ScatterOptions& opt = {});

// rho on a symmetric real grid. A z = 0 node is filled by linear
// extrapolation from the two smallest-|z| neighbors (zeta^{-1} bbreve has a
// finite limit but direct evaluation divides by zero).
ReflectionCoefficient reflection_map(const Potential& q,
                                     const std::vector<double>& z_grid,
                                     const ScatterOptions& opt = {});

// Soliton-free diagnostics: c_margin plus the argument-principle winding
// number of the analytic continuation of a over a rectangle in
// {Im zeta^2 < 0}. Winding 0 means no bright solitons detected at this
// resolution.
SolitonFreeReport soliton_free_report(const ReflectionCoefficient& rc,
                                      const Potential& q,
                                      const ScatterOptions& opt = {});

// Cubic-spline interpolation of the sampled rho at z inside the (uniform)
// grid; used by the downstream modules that evaluate rho off the nodes.
cplx rho_interp(const ReflectionCoefficient& rc, double z);

std::string to_json(const Potential& q);
std::string to_json(const ReflectionCoefficient& rc);
Potential potential_from_json(const std::string& text);
ReflectionCoefficient reflection_from_json(const std::string& text);

}  // namespace dnls::scattering
