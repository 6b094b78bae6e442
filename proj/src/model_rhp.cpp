#include "dnls/model_rhp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dnls/cauchy.hpp"
#include "dnls/specfun.hpp"

namespace dnls::model_rhp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;

// e^{i n pi/4}
cplx u8(int n) { return std::polar(1.0, n * kPi / 4.0); }

cplx D(cplx a, cplx z) { return specfun::pcf_D(a, z); }

}  // namespace

FrozenData freeze(const scattering::ReflectionCoefficient& rc, double xi,
                  double t, SignCase sign_case) {
    const bool tpos = t_positive(sign_case);
    if (tpos ? !(t >= 1.0) : !(t <= -1.0)) {
        throw Error(ErrCode::invalid_argument,
                    "freeze: need |t| >= 1 with sign(t) matching the case");
    }
    const bool xi_should_be_negative = (x_positive(sign_case) == tpos);
    if (xi_should_be_negative ? !(xi < 0.0) : !(xi > 0.0)) {
        throw Error(ErrCode::invalid_argument,
                    "freeze: sign(xi) incompatible with the case "
                    "(xi = -x/4t)");
    }
    const cauchy::KappaFunction kap(rc);
    const double kappa = kap(xi);
    const cplx rho = scattering::rho_interp(rc, xi);
    const double ta = std::abs(t);
    // e^{-+2i kappa log sqrt(8|t|) +- 4i|t| xi^2} (upper sign for t > 0)
    const double phase =
        (tpos ? -1.0 : 1.0) * kappa * std::log(8.0 * ta) + 4.0 * t * xi * xi;
    const cplx osc = std::polar(1.0, phase);

    cplx r;
    switch (sign_case) {
        case SignCase::pp: {
            const cplx d0l = cauchy::delta0_eval(kap, xi, cauchy::Side::left);
            r = rho * d0l * d0l * osc;
            break;
        }
        case SignCase::pm: {
            const cplx d0l = cauchy::delta0_eval(kap, xi, cauchy::Side::left);
            r = rho * std::exp(-kTwoPi * kappa) * d0l * d0l * osc;
            break;
        }
        case SignCase::mp: {
            const cplx d0r = cauchy::delta0_eval(kap, xi, cauchy::Side::right);
            const cplx sr = std::exp(kTwoPi * kappa) / (d0r * d0r);
            r = -rho * std::exp(kTwoPi * kappa) * sr * osc;
            break;
        }
        case SignCase::mm: {
            const cplx d0r = cauchy::delta0_eval(kap, xi, cauchy::Side::right);
            const cplx sr = std::exp(kTwoPi * kappa) / (d0r * d0r);
            r = -rho * sr * osc;
            break;
        }
    }
    const double margin = 1.0 - xi * std::norm(r);
    if (!(margin > 0.0)) {
        throw Error(ErrCode::domain,
                    "freeze: spectral condition 1 - xi|r|^2 > 0 fails "
                    "(margin " +
                        std::to_string(margin) + ")");
    }
    return {xi, kappa, r, sign_case};
}

cplx beta12_eval(const FrozenData& fd) {
    if (fd.r_xi == cplx(0.0)) {
        if (fd.kappa == 0.0) return 0.0;
        throw Error(ErrCode::invalid_argument,
                    "beta12_eval: r_xi = 0 with kappa != 0");
    }
    if (fd.kappa == 0.0) return 0.0;
    const double k = fd.kappa;
    const bool tpos = t_positive(fd.sign_case);
    // Gamma(-ik) for t > 0, Gamma(+ik) for t < 0.
    const cplx gam = specfun::gamma_complex(cplx(0.0, tpos ? -k : k));
    double extra = 0.0;  // the e^{-+2 pi kappa} of the mixed cases
    if (fd.sign_case == SignCase::pm) extra = -kTwoPi * k;
    if (fd.sign_case == SignCase::mp) extra = kTwoPi * k;
    const cplx c = kSqrt2Pi * std::exp(-kPi * k / 2.0 + extra) *
                   u8(tpos ? 1 : 3) / gam;
    return c / (-fd.xi * std::conj(fd.r_xi));
}

ModelSolution model_solution(const FrozenData& fd) {
    ModelSolution ms;
    ms.frozen = fd;
    ms.beta12 = beta12_eval(fd);
    ms.beta21 = (fd.kappa == 0.0) ? cplx(0.0) : fd.kappa / ms.beta12;
    return ms;
}

Mat2 phi_eval(const ModelSolution& ms, cplx zeta) {
    const double k = ms.frozen.kappa;
    const cplx ik(0.0, k);
    const cplx ib12 = I * ms.beta12;
    const cplx ib21 = I * ms.beta21;
    const bool upper = zeta.imag() >= 0.0;
    // e^{n pi kappa / 4}
    auto ek = [k](int n) { return std::exp(n * kPi * k / 4.0); };

    Mat2 m;
    if (t_positive(ms.frozen.sign_case)) {
        if (upper) {
            m.a11 = ek(-3) * D(ik, zeta * u8(-3));
            m.a12 = -ib12 * ek(1) * u8(-1) * D(-ik - 1.0, zeta * u8(-1));
            m.a21 = ib21 * ek(-3) * u8(-3) * D(ik - 1.0, zeta * u8(-3));
            m.a22 = ek(1) * D(-ik, zeta * u8(-1));
        } else if (ms.frozen.sign_case == SignCase::pp) {
            // principal branch: reach the lower half through arg in (-pi, 0)
            m.a11 = ek(1) * D(ik, zeta * u8(1));
            m.a12 = -ib12 * ek(-3) * u8(3) * D(-ik - 1.0, zeta * u8(3));
            m.a21 = ib21 * ek(1) * u8(1) * D(ik - 1.0, zeta * u8(1));
            m.a22 = ek(-3) * D(-ik, zeta * u8(3));
        } else {
            // shifted branch: arg in (pi, 2pi), rotations by -5pi/4, -7pi/4
            m.a11 = ek(-7) * D(ik, zeta * u8(-7));
            m.a12 = -ib12 * ek(5) * u8(-5) * D(-ik - 1.0, zeta * u8(-5));
            m.a21 = ib21 * ek(-7) * u8(-7) * D(ik - 1.0, zeta * u8(-7));
            m.a22 = ek(5) * D(-ik, zeta * u8(-5));
        }
    } else {
        if (upper) {
            m.a11 = ek(1) * D(-ik, zeta * u8(-1));
            m.a12 = ib12 * ek(-3) * u8(-3) * D(ik - 1.0, zeta * u8(-3));
            m.a21 = -ib21 * ek(1) * u8(-1) * D(-ik - 1.0, zeta * u8(-1));
            m.a22 = ek(-3) * D(ik, zeta * u8(-3));
        } else if (ms.frozen.sign_case == SignCase::mm) {
            m.a11 = ek(-3) * D(-ik, zeta * u8(3));
            m.a12 = ib12 * ek(1) * u8(1) * D(ik - 1.0, zeta * u8(1));
            m.a21 = -ib21 * ek(-3) * u8(3) * D(-ik - 1.0, zeta * u8(3));
            m.a22 = ek(1) * D(ik, zeta * u8(1));
        } else {
            m.a11 = ek(5) * D(-ik, zeta * u8(-5));
            m.a12 = ib12 * ek(-7) * u8(-7) * D(ik - 1.0, zeta * u8(-7));
            m.a21 = -ib21 * ek(5) * u8(-5) * D(-ik - 1.0, zeta * u8(-5));
            m.a22 = ek(-7) * D(ik, zeta * u8(-7));
        }
    }
    return m;
}

double jump_residual(const ModelSolution& ms, double zeta_real) {
    if (zeta_real == 0.0 || std::abs(zeta_real) > 50.0) {
        throw Error(ErrCode::invalid_argument,
                    "jump_residual: need real zeta, 0 < |zeta| <= 50");
    }
    const FrozenData& fd = ms.frozen;
    // Both boundary values by direct evaluation: Im = 0 selects the upper
    // form; a denormal negative imaginary part selects the lower one without
    // perturbing the value.
    const Mat2 plus = phi_eval(ms, cplx(zeta_real, 0.0));
    const Mat2 minus = phi_eval(ms, cplx(zeta_real, -1e-300));
    const cplx r = fd.r_xi;
    const double g = 1.0 - fd.xi * std::norm(r);
    Mat2 v;
    if (x_positive(fd.sign_case)) {
        v = {cplx(g), r, -fd.xi * std::conj(r), cplx(1.0)};
    } else {
        v = {cplx(1.0), r, -fd.xi * std::conj(r), cplx(g)};
    }
    return (plus - minus * v).frobenius();
}

Mat2 p_matrix(const FrozenData& fd, Sector sector) {
    const cplx r = fd.r_xi;
    const cplx xrbar = fd.xi * std::conj(r);
    const double g = 1.0 - fd.xi * std::norm(r);
    switch (sector) {
        case Sector::omega1:
            return {cplx(1.0), cplx(0.0), xrbar, cplx(1.0)};
        case Sector::omega3:
            return {cplx(1.0), -r / g, cplx(0.0), cplx(1.0)};
        case Sector::omega4:
            return {cplx(1.0), cplx(0.0), -xrbar / g, cplx(1.0)};
        case Sector::omega6:
            return {cplx(1.0), r, cplx(0.0), cplx(1.0)};
        case Sector::omega2:
        case Sector::omega5:
            return Mat2::identity();
    }
    throw Error(ErrCode::invalid_argument, "p_matrix: bad sector");
}

cplx zeta_pow_ikappa(const FrozenData& fd, cplx zeta) {
    if (zeta == cplx(0.0)) {
        throw Error(ErrCode::invalid_argument, "zeta_pow_ikappa: zeta = 0");
    }
    double arg = std::arg(zeta);  // principal, (-pi, pi]
    const bool shifted =
        fd.sign_case == SignCase::pm || fd.sign_case == SignCase::mp;
    if (shifted && arg < 0.0) arg += kTwoPi;  // arg in [0, 2pi)
    const cplx log_zeta(std::log(std::abs(zeta)), arg);
    return std::exp(cplx(0.0, fd.kappa) * log_zeta);
}

}  // namespace dnls::model_rhp
