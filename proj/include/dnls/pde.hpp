// Independent time-domain evolution of the gauge-transformed equation
//
//   i q_t + q_xx + i q^2 qbar_x + (1/2) |q|^4 q = 0
//
// on a large periodic box, used as ground truth for the asymptotic formulas.
//
// Numerics: pseudo-spectral in x. The linear flow e^{-i k^2 t} is applied
// exactly by an integrating factor in Fourier space; the nonlinear terms are
// evaluated in physical space (qbar_x = conj(q_x) by spectral
// differentiation) and advanced with the classical 4th-order integrating-
// factor Runge-Kutta step. The nonlinear term is 2/3-rule dealiased. The
// step obeys dt = min(dt_max, c_dt / ||q||_inf^2), refreshed as the field
// decays. Conserved mass int |q|^2 dx is tracked by Parseval from the
// spectral state and audited against the initial value.
//
// Backward time is run through the symmetry q(x,t) -> conj(q(-x,-t)), which
// maps solutions to solutions: reflect-conjugate, evolve forward, map back.
//
// The gauge maps between the physical field u and q multiply by the
// cumulative phase exp(-+ i int_{-L/2}^x |.|^2 dy), computed with spectral
// accuracy (mean ramp plus spectral antiderivative of the mean-free part).
#pragma once

#include <vector>

#include "dnls/scattering.hpp"
#include "dnls/types.hpp"

namespace dnls::pde {

struct EvolveControls {
    double l_box = 800.0;   // periodic box [-l_box/2, l_box/2)
    int n_fft = 16384;      // power of two
    double c_dt = 0.5;      // CFL-like bound dt <= c_dt / ||q||_inf^2
    double dt_max = 0.01;   // accuracy cap on the step
    double wrap_tol = 1e-8;   // max tolerated |q| at the box boundary
    double mass_tol = 1e-8;   // relative mass drift per unit time
};

// Complex field on the uniform periodic grid x_j = -l_box/2 + j dx,
// dx = l_box / n, at a fixed time, with the conserved-mass ledger.
struct FieldState {
    std::vector<cplx> field;
    double time = 0.0;
    double mass = 0.0;    // int |field|^2 dx at `time`
    double mass0 = 0.0;   // mass of the originating initial datum
    double l_box = 0.0;

    double dx() const { return l_box / static_cast<double>(field.size()); }
    double x(size_t j) const { return -0.5 * l_box + dx() * static_cast<double>(j); }
};

// Embed q0 into the periodic box (cubic interpolation inside the sampled
// window, zero outside) and evolve to time T (either sign).
// Errors: invalid_argument (bad controls / window outside box),
// domain (boundary amplitude exceeds wrap_tol: box too small),
// numeric (relative mass drift beyond mass_tol per unit time: instability).
FieldState evolve_gi(const scattering::Potential& q0, double T,
                     const EvolveControls& c = {});

// Continue an existing state to t_target (either direction).
FieldState evolve_gi(const FieldState& from, double t_target,
                     const EvolveControls& c = {});

// One run with snapshots at the given times (strictly increasing magnitude,
// all of one sign; 0 allowed as the first entry).
std::vector<FieldState> evolve_gi_snapshots(const scattering::Potential& q0,
                                            const std::vector<double>& times,
                                            const EvolveControls& c = {});

// u -> q = u exp(-i int_{-L/2}^x |u|^2 dy) and its inverse
// q -> u = q exp(+i int_{-L/2}^x |q|^2 dy); |q| = |u| pointwise and
// gauge_inverse(gauge_forward(u)) = u to spectral accuracy.
FieldState gauge_forward(const FieldState& u);
FieldState gauge_inverse(const FieldState& q);

struct RaySample {
    double t = 0.0;
    cplx q;
};

// Field along the stationary-phase ray x = -4 xi t, one sample per state
// (cubic interpolation on the grid). Error(range) if the ray leaves the box.
std::vector<RaySample> ray_probe(const std::vector<FieldState>& states,
                                 double xi);

}  // namespace dnls::pde
