// Long-time asymptotic formulas for the gauge-transformed field q and the
// original field u, in all four (sign x, sign t) cases, plus the weak
// Plancherel end-to-end probe.
//
// Along the ray xi = -x/(4t):
//
//   q_as(x,t) = |t|^{-1/2} alpha(xi) exp( i( -+ kappa log(8|t|) + x^2/(4t) ) )
//
// (upper sign for t > 0), with |alpha|^2 = kappa(xi)/(2 xi) and the argument
// assembled case by case:
//
//   arg alpha_1 (t>0, x>0) =  pi/4 + arg Gamma( i kappa) + arg rho(xi) + S_l
//   arg alpha_2 (t>0, x<0) =  arg alpha_1 - pi
//   arg alpha_1 (t<0, x<0) = -pi/4 - arg Gamma( i kappa) + arg rho(xi) + S_r
//   arg alpha_2 (t<0, x>0) =  arg alpha_1 + pi
//
// where e^{i S_l} = delta_{0l}^2 and e^{i S_r} = e^{2 pi kappa}/delta_{0r}^2
// are the unimodular phase constants of the scalar RHP (see cauchy.hpp); the
// log-weighted Stieltjes integrals in the published arg-alpha formulas equal
// these delta_0 phases, which the cauchy module already evaluates with
// subtracted-singularity quadrature.
//
// The physical field follows by the asymptotic gauge factor,
//
//   u_as = q_as * G,   G(t>0) = exp( 2i int_{xi}^{inf} kappa(s)/s ds ),
//                      G(t<0) = exp( 2i int_{-inf}^{xi} kappa(s)/s ds ),
//
// both unimodular (kappa/s >= 0 and integrable: kappa has a first-order zero
// at s = 0). The weak Plancherel identity ties the two ends of the pipeline:
//
//   exp( i int_R |q_0|^2 dy ) = exp( 2i int_R kappa(s)/s ds ).
//
// xi = 0 is excluded for Theorem-2 quantities (the gauge integrals split
// there); q_asymptotic at x = 0 uses a nearby-ray evaluation of the removable
// limit |alpha|^2 -> |rho(0)|^2/(4 pi).
#pragma once

#include <string>

#include "dnls/model_rhp.hpp"
#include "dnls/scattering.hpp"
#include "dnls/types.hpp"

namespace dnls::asymptotics {

// Per-(xi, sign-case) summary of Theorems 1/2 data. alpha_arg is reported in
// (-pi, pi]; gauge_phase is arg of the unimodular gauge factor, in radians.
struct AsymptoticProfile {
    double xi = 0.0;
    model_rhp::SignCase sign_case = model_rhp::SignCase::pp;
    double kappa = 0.0;
    double alpha_mod = 0.0;
    double alpha_arg = 0.0;
    double gauge_phase = 0.0;
};

// alpha(xi) for the given sign case, by the closed arg-alpha formulas above.
// Requires xi != 0, xi at least 1 inside the rc grid, and kappa(xi)/xi >= 0
// (automatic for genuine scattering data; violations throw Error(domain)).
// rho(xi) = 0 returns 0.
cplx alpha_eval(const scattering::ReflectionCoefficient& rc, double xi,
                model_rhp::SignCase sign_case);

// q_as(x,t). The sign case is selected from (sign x, sign t); requires
// |t| >= t_min (default 5; Error(invalid_argument) below). x = 0 evaluates
// the removable x -> 0 limit on the nearby ray |xi| = 1e-4.
cplx q_asymptotic(const scattering::ReflectionCoefficient& rc, double x,
                  double t, double t_min = 5.0);

// u_as(x,t) = q_as(x,t) * gauge_phase_asymptotic(rc, xi, t > 0).
// Requires xi = -x/(4t) != 0 (Error(invalid_argument)).
cplx u_asymptotic(const scattering::ReflectionCoefficient& rc, double x,
                  double t, double t_min = 5.0);

// The unimodular large-time gauge factor G above. Requires xi != 0.
cplx gauge_phase_asymptotic(const scattering::ReflectionCoefficient& rc,
                            double xi, bool t_positive);

// | exp(i int |q0|^2) - exp(2i int_R kappa/s ds) |; the end-to-end direct
// scattering correctness probe (0 for exact data, quadrature/truncation
// limited in practice). rc must come from q.
double plancherel_check(const scattering::Potential& q,
                        const scattering::ReflectionCoefficient& rc);

// Bundles kappa, alpha, and the gauge phase for one (xi, case).
AsymptoticProfile profile(const scattering::ReflectionCoefficient& rc,
                          double xi, model_rhp::SignCase sign_case);

// JSON round-trip (harness report contract):
//   {"type":"asymptotic_profile","xi":..,"sign_case":"pp|pm|mp|mm",
//    "kappa":..,"alpha_mod":..,"alpha_arg":..,"gauge_phase":..}
std::string to_json(const AsymptoticProfile& p);
AsymptoticProfile profile_from_json(const std::string& text);

}  // namespace dnls::asymptotics
