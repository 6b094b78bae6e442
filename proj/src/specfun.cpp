// Implementation notes live in the header; this file keeps the three regimes
// (power series / asymptotic series / inward Taylor stepping) in that order.

#include "dnls/specfun.hpp"

#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "dnls/dd.hpp"

namespace dnls::specfun {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrt2Pi = 2.506628274631000502415765284811045253;
constexpr double kSwitchRadius = 10.0;   // series/stepping vs asymptotics
constexpr double kSeriesReZ2Max = 20.0;  // conditioning cap for the series

bool near_nonpositive_integer(cplx z) {
    if (std::abs(z.imag()) > 1e-13) return false;
    const double r = z.real();
    return r < 0.5 && std::abs(r - std::round(r)) < 1e-13;
}

// Gamma on Re z >= 0.5 via GSL's complex log-gamma.
cplx gamma_right_half(cplx z) {
    gsl_sf_result lnr, arg;
    gsl_sf_lngamma_complex_e(z.real(), z.imag(), &lnr, &arg);
    return std::exp(lnr.val) * cplx(std::cos(arg.val), std::sin(arg.val));
}

void check_order_box(cplx a) {
    if (std::abs(a.real()) > kOrderBoxReMax + 1e-12 ||
        std::abs(a.imag()) > kOrderBoxImMax + 1e-12) {
        throw Error(ErrCode::range,
                    "pcf order outside supported box |Re a|<=2, |Im a|<=10");
    }
}

void check_arg_box(cplx z) {
    if (std::abs(z) > kArgBoxMax + 1e-9) {
        throw Error(ErrCode::range, "pcf argument outside |z| <= 200");
    }
}

// ------------------------------------------------------------- power series
//
// D_a = e^{-z^2/4} (A w_e + B w_o), w'' - z w' + a w = 0,
// c_{n+2} = (n - a) c_n / ((n+2)(n+1)), w_e: c_0 = 1, w_o: c_1 = 1.
// Term bookkeeping avoids dividing by z (so z = 0 is fine):
//   P_n = c_n z^n,   dP_n = n c_n z^{n-1},
//   dP_{n+2} = P_n z (n - a)/(n + 1),   P_{n+2} = dP_{n+2} z / (n + 2).
PcfValue pcf_series(cplx a, cplx z, double* cond_est) {
    using dd::Cdd;
    const Cdd zc = dd::from(z);
    const Cdd ac = dd::from(a);

    Cdd sum_e{}, dsum_e{}, sum_o{}, dsum_o{};
    double peak_e = 0.0, peak_o = 0.0;  // largest term magnitude per chain
    auto run_chain = [&](int start, Cdd P, Cdd dP, Cdd& S, Cdd& dS,
                         double& peak) {
        S = P;
        dS = dP;
        peak = dd::abs_est(P) + dd::abs_est(dP);
        int quiet = 0;
        for (int n = start; n < 2000 && quiet < 2; n += 2) {
            // (n - a) as complex dd: exact since n is a small integer.
            Cdd na = {dd::sub(dd::from(double(n)), ac.re),
                      {-ac.im.hi, -ac.im.lo}};
            Cdd dPn = dd::div(dd::mul(dd::mul(P, zc), na), double(n + 1));
            Cdd Pn = dd::div(dd::mul(dPn, zc), double(n + 2));
            S = dd::add(S, Pn);
            dS = dd::add(dS, dPn);
            P = Pn;
            const double mag = dd::abs_est(Pn) + dd::abs_est(dPn);
            peak = std::max(peak, mag);
            const double ref = dd::abs_est(S) + dd::abs_est(dS) + 1e-300;
            quiet = (mag < 1e-34 * ref) ? quiet + 1 : 0;
        }
    };
    run_chain(0, dd::from(cplx(1.0)), dd::from(cplx(0.0)), sum_e, dsum_e,
              peak_e);
    run_chain(1, dd::from(z), dd::from(cplx(1.0)), sum_o, dsum_o, peak_o);

    // Prefactors: A = sqrt(pi) 2^{a/2}/Gamma((1-a)/2),
    //             B = -sqrt(pi) 2^{(a+1)/2}/Gamma(-a/2),
    // computed in double-double: the final A w_e + B w_o combination can
    // cancel by the full series condition number (up to ~1e17 at the order
    // box corners), so double-precision prefactors are not good enough.
    // rgamma_cdd maps Gamma poles (a = 1, 3, ... resp. a = 0, -2, ...) to 0.
    const Cdd half = {dd::from(0.5), dd::from(0.0)};
    const Cdd ah = {dd::div(ac.re, 2.0), dd::div(ac.im, 2.0)};  // a/2
    const Cdd pow_e =  // 2^{a/2}
        dd::exp_cdd({dd::mul(ah.re, dd::kLn2), dd::mul(ah.im, dd::kLn2)});
    const Cdd pow_o =  // 2^{(a+1)/2}
        dd::exp_cdd({dd::mul(dd::add(ah.re, dd::from(0.5)), dd::kLn2),
                     dd::mul(ah.im, dd::kLn2)});
    const Cdd rg_e = dd::rgamma_cdd(
        {dd::sub(half.re, ah.re), {-ah.im.hi, -ah.im.lo}});  // 1/G((1-a)/2)
    const Cdd rg_o =
        dd::rgamma_cdd({{-ah.re.hi, -ah.re.lo}, {-ah.im.hi, -ah.im.lo}});
    auto scale = [&](const Cdd& m, const Cdd& rg, double sgn) {
        Cdd r = dd::mul(m, rg);
        r = {dd::mul(r.re, dd::kSqrtPi), dd::mul(r.im, dd::kSqrtPi)};
        return Cdd{dd::mul(r.re, sgn), dd::mul(r.im, sgn)};
    };
    const Cdd A = scale(pow_e, rg_e, 1.0);
    const Cdd B = scale(pow_o, rg_o, -1.0);

    auto combine = [&](const Cdd& e, const Cdd& o) {
        return dd::to_complex(dd::add(dd::mul(e, A), dd::mul(o, B)));
    };
    const cplx w = combine(sum_e, sum_o);
    const cplx dw = combine(dsum_e, dsum_o);

    // Roundoff estimate for the cancelling combination: dd units-in-last-place
    // of the largest intermediate, relative to what survived. Drives the
    // fallback to ODE stepping at the extreme-order corners of the box.
    if (cond_est) {
        const double amag = dd::abs_est(A), bmag = dd::abs_est(B);
        const double big =
            amag * (peak_e + dd::abs_est(sum_e) + dd::abs_est(dsum_e)) +
            bmag * (peak_o + dd::abs_est(sum_o) + dd::abs_est(dsum_o));
        const double small =
            std::min(std::abs(w), std::abs(dw) / (1.0 + std::abs(z)));
        *cond_est = 1e-31 * big / (small + 1e-300);
    }

    const cplx pref = std::exp(-z * z / 4.0);
    return {pref * w, pref * (dw - 0.5 * z * w)};
}

// -------------------------------------------------------- asymptotic series
//
// S1 = sum_s (-1)^s (-a)_{2s} / (s! 2^s z^{2s});   T_0 = z^a e^{-z^2/4},
// with termwise derivative d/dz[z^{a-2s}] folded in. The subdominant branch
// uses S2 = sum_s (a+1)_{2s} / (s! 2^s z^{2s}).
PcfValue pcf_asym(cplx a, cplx z) {
    const cplx logz = std::log(z);  // principal; |z| >= 10 here so z != 0
    const cplx z2 = z * z;
    const cplx inv_z2 = 1.0 / z2;

    // Dominant branch: V = sum T_s z^{-2s}, T_{s+1} = -T_s (-a+2s)(-a+2s+1) /
    // (2(s+1) z^2); value and derivative accumulated together.
    cplx V = 0.0, dV = 0.0;
    {
        cplx T = 1.0;
        double min_mag = 1e300;
        for (int s = 0; s < 200; ++s) {
            const double mag = std::abs(T);
            if (mag > min_mag) break;  // divergence onset: stop at min term
            min_mag = std::min(min_mag, mag);
            V += T;
            dV += T * ((a - 2.0 * s) / z - 0.5 * z);
            if (mag < 1e-18 * std::abs(V)) break;
            T *= -(-a + 2.0 * s) * (-a + 2.0 * s + 1.0) /
                 (2.0 * (s + 1.0)) * inv_z2;
        }
    }
    const cplx pref1 = std::exp(a * logz - 0.25 * z2);
    cplx D = pref1 * V;
    cplx Dp = pref1 * dV;

    // Subdominant branch, switched on across the Stokes rays arg z = +-pi/2.
    if (std::abs(std::arg(z)) > kPi / 2.0) {
        const double sigma = std::arg(z) > 0.0 ? 1.0 : -1.0;
        cplx U = 0.0, dU = 0.0;
        cplx T = 1.0;
        double min_mag = 1e300;
        for (int s = 0; s < 200; ++s) {
            const double mag = std::abs(T);
            if (mag > min_mag) break;
            min_mag = std::min(min_mag, mag);
            U += T;
            dU += T * ((-a - 1.0 - 2.0 * s) / z + 0.5 * z);
            if (mag < 1e-18 * std::abs(U)) break;
            T *= (a + 1.0 + 2.0 * s) * (a + 2.0 + 2.0 * s) /
                 (2.0 * (s + 1.0)) * inv_z2;
        }
        const cplx coeff =
            -kSqrt2Pi * rgamma(-a) * std::exp(sigma * I * a * kPi);
        const cplx pref2 = coeff * std::exp(-(a + 1.0) * logz + 0.25 * z2);
        D += pref2 * U;
        Dp += pref2 * dU;
    }
    return {D, Dp};
}

// --------------------------------------------- inward Taylor-series stepping
//
// For the near-real annulus (|z| < 10, Re z^2 > 20) where the power series is
// ill-conditioned: anchor D, D' at z0 = 10 e^{i arg z} from the asymptotics
// and integrate D'' = (z^2/4 - a - 1/2) D inward along the ray with local
// Taylor expansions. Inward means the dominant/recessive ratio decreases, so
// the anchor's relative error is not amplified.
PcfValue pcf_step_inward(cplx a, cplx z) {
    // Anchor at |z0| = 12: far enough out that the asymptotic series is below
    // ~1e-10 across the whole order box in every direction.
    constexpr double kAnchorRadius = 12.0;
    const double theta = std::arg(z);
    cplx z0 = kAnchorRadius * std::exp(I * theta);
    PcfValue y = pcf_asym(a, z0);

    const double total = kAnchorRadius - std::abs(z);
    const int nsteps = std::max(1, int(std::ceil(total / 0.5)));
    const cplx dir = std::exp(I * theta);
    const double hlen = -total / nsteps;  // negative: toward the origin

    for (int step = 0; step < nsteps; ++step) {
        const cplx h = hlen * dir;
        // q(z0 + u) = q0 + q1 u + q2 u^2 with q = z^2/4 - a - 1/2.
        const cplx q0 = z0 * z0 / 4.0 - a - 0.5;
        const cplx q1 = z0 / 2.0;
        const cplx q2 = 0.25;

        std::array<cplx, 64> c{};
        c[0] = y.D;
        c[1] = y.Dprime;
        cplx S = c[0] + c[1] * h;
        cplx dS = c[1];
        cplx hp = h;  // h^n for the value sum; derivative sum uses h^{n-1}
        int quiet = 0;
        for (int n = 0; n + 2 < int(c.size()) && quiet < 2; ++n) {
            cplx rhs = q0 * c[n];
            if (n >= 1) rhs += q1 * c[n - 1];
            if (n >= 2) rhs += q2 * c[n - 2];
            c[n + 2] = rhs / (double(n + 2) * double(n + 1));
            dS += double(n + 2) * c[n + 2] * hp;
            hp *= h;
            const cplx term = c[n + 2] * hp;
            S += term;
            quiet = (std::abs(term) < 1e-17 * std::abs(S) &&
                     std::abs(double(n + 2) * c[n + 2] * hp) <
                         1e-17 * (std::abs(dS) + 1e-300))
                        ? quiet + 1
                        : 0;
        }
        y = {S, dS};
        z0 += h;
    }
    return y;
}

}  // namespace

cplx gamma_complex(cplx z) {
    if (near_nonpositive_integer(z)) {
        throw Error(ErrCode::domain, "gamma_complex: pole at nonpositive integer");
    }
    if (z.real() >= 0.5) return gamma_right_half(z);
    // Reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z)).
    const cplx s = std::sin(kPi * z);
    return kPi / (s * gamma_right_half(1.0 - z));
}

cplx rgamma(cplx z) {
    if (near_nonpositive_integer(z)) return 0.0;
    if (z.real() >= 0.5) return 1.0 / gamma_right_half(z);
    return std::sin(kPi * z) * gamma_right_half(1.0 - z) / kPi;
}

namespace {

PcfValue pcf_dispatch(cplx a, cplx z, bool allow_rotation) {
    const double r = std::abs(z);
    if (r >= kSwitchRadius) return pcf_asym(a, z);
    // Inside the switch radius: prefer the series; its runtime roundoff
    // estimate decides. When it cancels too hard there are two resc routes:
    //  - near the positive real axis (|arg z| <= ~pi/4, D recessive) inward
    //    ODE stepping from an asymptotic anchor is stable;
    //  - elsewhere (large |Im a| near the imaginary axis) rotate via
    //      D_a(z) = Gamma(a+1)/sqrt(2 pi)
    //               * [e^{i a pi/2} D_{-a-1}(i z) + e^{-i a pi/2} D_{-a-1}(-i z)],
    //    which maps both sub-evaluations onto well-conditioned rays; the two
    //    terms do not cancel in this region.
    double cond = 0.0;
    const PcfValue v = pcf_series(a, z, &cond);
    if (cond < 1e-10) return v;
    if (std::abs(std::arg(z)) <= 0.26 * kPi) return pcf_step_inward(a, z);
    if (!allow_rotation) return v;
    const cplx b = -a - 1.0;
    const cplx iz = cplx(0.0, 1.0) * z;
    const PcfValue p = pcf_dispatch(b, iz, false);
    const PcfValue m = pcf_dispatch(b, -iz, false);
    const cplx pref = gamma_complex(a + 1.0) / kSqrt2Pi;
    const cplx ep = std::exp(cplx(0.0, 0.5 * kPi) * a);
    const cplx em = 1.0 / ep;
    PcfValue out;
    out.D = pref * (ep * p.D + em * m.D);
    out.Dprime = pref * cplx(0.0, 1.0) * (ep * p.Dprime - em * m.Dprime);
    return out;
}

}  // namespace

PcfValue pcf_D_full(cplx a, cplx z) {
    check_order_box(a);
    check_arg_box(z);
    return pcf_dispatch(a, z, true);
}

cplx pcf_D(cplx a, cplx z) { return pcf_D_full(a, z).D; }

double pcf_recurrence_residual(cplx a, cplx z) {
    check_order_box(a - 1.0);
    const PcfValue va = pcf_D_full(a, z);
    const PcfValue vb = pcf_D_full(a - 1.0, z);
    return std::abs(va.Dprime + 0.5 * z * va.D - a * vb.D);
}

cplx pcf_wronskian(cplx a, cplx z) {
    const PcfValue vp = pcf_D_full(a, z);
    const PcfValue vm = pcf_D_full(a, -z);
    return -vp.D * vm.Dprime - vp.Dprime * vm.D;
}

}  // namespace dnls::specfun
