// The explicit parabolic-cylinder model Riemann-Hilbert problem: the matrix
// Phi(zeta; xi) in all four sign cases of (t, x), its constant jump V0 across
// the real axis, the sector factors P, and the coefficient beta12 that feeds
// the asymptotic amplitude and phase.
//
// Conventions (all verified against a 30-digit independent evaluation):
//   * kappa(xi) = -(1/2pi) log(1 - xi |rho(xi)|^2); sign kappa = sign xi.
//   * The frozen scattering coefficient r_xi collects rho(xi), the local
//     factor delta0 of the matching side, and the explicit phases
//     e^{-2i kappa log sqrt(8|t|)} e^{4i|t| xi^2} (signs flip for t < 0):
//       (t>0, x>0): r = rho delta0l^2 E(t),        |r| = |rho|
//       (t>0, x<0): r = rho e^{-2pi k} delta0l^2 E(t),  |r| = |rho| e^{-2pi k}
//       (t<0, x>0): r = -rho e^{2pi k} S_r E(-t),       |r| = |rho| e^{+2pi k}
//       (t<0, x<0): r = -rho S_r E(-t),             |r| = |rho|
//     with E(t) = e^{-2i kappa log sqrt(8t) + 4it xi^2} and the unimodular
//     S_r = e^{2 pi kappa} / delta0r^2.
//   * Phi solves Phi_+ = Phi_- V0 on the real line with the constant matrix
//       x > 0:  V0 = [[1 - xi|r|^2, r], [-xi conj r, 1]]
//       x < 0:  V0 = [[1, r], [-xi conj r, 1 - xi|r|^2]]
//     (the 1 - xi|r|^2 entry follows the sign of x; with the spectral
//     normalization 1 - xi|r|^2 = e^{-2 pi kappa} this is det V0 = 1).
//   * Branch of zeta^{i kappa}: principal, arg in (-pi, pi], for the cases
//     (t>0,x>0) and (t<0,x<0); shifted, arg in [0, 2pi), for the mixed ones.
//   * beta12 = C_case / (-xi conj(r_xi)), beta21 = kappa / beta12, with
//       C = sqrt(2pi) e^{-pi k/2} *
//           { e^{ i pi/4} / Gamma(-ik)               (t>0, x>0)
//             e^{ i pi/4} e^{-2 pi k} / Gamma(-ik)   (t>0, x<0)
//             e^{3i pi/4} e^{+2 pi k} / Gamma(+ik)   (t<0, x>0)
//             e^{3i pi/4} / Gamma(+ik)               (t<0, x<0) }.
//
// Note on the two r-normalizations: jump_residual is exact only when the
// input satisfies 1 - xi|r|^2 = e^{-2 pi kappa} (true for the pure-sign
// cases' freeze output, and for synthetic data built from that constraint).
// The mixed-sign freeze output carries the extra modulus e^{-+2 pi kappa},
// which the matching e^{-+2 pi kappa} inside C_case cancels so that
// |beta12|^2 = kappa/xi holds for the pipeline data in all four cases.
#pragma once

#include "dnls/scattering.hpp"
#include "dnls/types.hpp"

namespace dnls::model_rhp {

// Sign case (sign of t, sign of x); xi = -x/(4t), so (+,+) and (-,-) force
// xi < 0 (kappa < 0) while the mixed cases force xi > 0 (kappa > 0).
enum class SignCase { pp, pm, mp, mm };  // (t,x) = (+,+), (+,-), (-,+), (-,-)

inline bool t_positive(SignCase c) {
    return c == SignCase::pp || c == SignCase::pm;
}
inline bool x_positive(SignCase c) {
    return c == SignCase::pp || c == SignCase::mp;
}

// Frozen spectral data at a single ray xi = -x/(4t).
struct FrozenData {
    double xi = 0.0;
    double kappa = 0.0;
    cplx r_xi{0.0};
    SignCase sign_case = SignCase::pp;
};

// FrozenData plus the model coefficients; beta12 beta21 = kappa.
struct ModelSolution {
    FrozenData frozen;
    cplx beta12{0.0};
    cplx beta21{0.0};
};

// Sectors around the real axis for the contour-deformation factor P
// (omega2 and omega5 are the identity sectors).
enum class Sector { omega1, omega2, omega3, omega4, omega5, omega6 };

// Assemble FrozenData from a sampled reflection coefficient at ray xi and
// time t. Preconditions: |t| >= 1 with sign(t) matching the case; sign(xi)
// compatible with the case (xi = -x/4t); xi at least 1 inside the rc grid
// (the delta0 factor needs the unit neighborhood). Throws ErrCode::domain
// if the spectral condition 1 - xi |r_xi|^2 > 0 fails, with the margin in
// the message.
FrozenData freeze(const scattering::ReflectionCoefficient& rc, double xi,
                  double t, SignCase sign_case);

// beta12 = C_case / (-xi conj r); returns 0 when kappa == 0 and r == 0
// (degenerate reflectionless limit); throws ErrCode::invalid_argument when
// r == 0 with kappa != 0.
cplx beta12_eval(const FrozenData& fd);

// Pack beta12 (closed form) and beta21 = kappa/beta12 with the data.
ModelSolution model_solution(const FrozenData& fd);

// Evaluate the closed-form Phi at zeta off the real axis (Im zeta == 0 is
// treated as the upper boundary value; both boundary values exist and the
// jump relation connects them). det Phi = 1 to ~1e-10.
Mat2 phi_eval(const ModelSolution& ms, cplx zeta);

// || Phi_+(zeta) - Phi_-(zeta) V0 ||_F at real zeta (|zeta| <= 50, != 0).
// Meaningful (~1e-9) only under the spectral normalization; see header note.
double jump_residual(const ModelSolution& ms, double zeta_real);

// Triangular sector factor; identity on omega2 and omega5.
Mat2 p_matrix(const FrozenData& fd, Sector sector);

// zeta^{i kappa} on the case's branch (principal vs arg in [0, 2pi)).
cplx zeta_pow_ikappa(const FrozenData& fd, cplx zeta);

}  // namespace dnls::model_rhp
