// Minimal double-double ("compensated") arithmetic used to sum the parabolic
// cylinder power series, whose partial sums cancel by up to e^{Re z^2 / 2}
// before converging. Algorithms are the classical error-free transformations
// (Knuth two-sum, FMA two-product, Dekker/Bailey add/mul); ~32 significant
// digits. Only the operations the series actually needs are provided.
#pragma once

#include <cmath>
#include <complex>

namespace dnls::dd {

struct Dd {
    double hi{0.0};
    double lo{0.0};
};

inline Dd quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline Dd two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline Dd two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline Dd add(const Dd& a, const Dd& b) {
    Dd s = two_sum(a.hi, b.hi);
    Dd t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline Dd sub(const Dd& a, const Dd& b) { return add(a, {-b.hi, -b.lo}); }

inline Dd mul(const Dd& a, const Dd& b) {
    Dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline Dd mul(const Dd& a, double b) {
    Dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline Dd div(const Dd& a, double b) {
    const double q1 = a.hi / b;
    Dd p = two_prod(q1, b);
    const double q2 = ((a.hi - p.hi) + (a.lo - p.lo)) / b;
    return quick_two_sum(q1, q2);
}

inline Dd from(double x) { return {x, 0.0}; }

inline double to_double(const Dd& a) { return a.hi + a.lo; }

// Complex double-double built on Dd; again only what the series needs.
struct Cdd {
    Dd re{};
    Dd im{};
};

inline Cdd from(std::complex<double> z) {
    return {from(z.real()), from(z.imag())};
}

inline Cdd add(const Cdd& a, const Cdd& b) {
    return {add(a.re, b.re), add(a.im, b.im)};
}

inline Cdd mul(const Cdd& a, const Cdd& b) {
    return {sub(mul(a.re, b.re), mul(a.im, b.im)),
            add(mul(a.re, b.im), mul(a.im, b.re))};
}

inline Cdd mul(const Cdd& a, double b) { return {mul(a.re, b), mul(a.im, b)}; }

inline Cdd div(const Cdd& a, double b) { return {div(a.re, b), div(a.im, b)}; }

inline std::complex<double> to_complex(const Cdd& a) {
    return {to_double(a.re), to_double(a.im)};
}

inline double abs_est(const Cdd& a) {
    return std::hypot(a.re.hi, a.im.hi);
}

// Divide dd by dd: long division with two refinement steps.
inline Dd div(const Dd& x, const Dd& y) {
    const double q1 = x.hi / y.hi;
    Dd r = sub(x, mul(y, q1));
    const double q2 = r.hi / y.hi;
    r = sub(r, mul(y, q2));
    const double q3 = r.hi / y.hi;
    Dd q = quick_two_sum(q1, q2);
    return add(q, from(q3));
}

inline Cdd div(const Cdd& a, const Cdd& b) {
    const Dd nb = add(mul(b.re, b.re), mul(b.im, b.im));
    const Cdd num = {add(mul(a.re, b.re), mul(a.im, b.im)),
                     sub(mul(a.im, b.re), mul(a.re, b.im))};
    return {div(num.re, nb), div(num.im, nb)};
}

// ----------------------------------------------------------- transcendentals
// Double-double elementary functions (~31-digit accuracy), needed only so the
// parabolic-cylinder series prefactors 1/Gamma((1-a)/2), 1/Gamma(-a/2) can be
// produced at the same precision as the compensated series sums. Constants
// are frozen from a 50-digit computation.

inline constexpr Dd kLn2{0.6931471805599453, 2.3190468138462996e-17};
inline constexpr Dd kPiDd{3.141592653589793, 1.2246467991473532e-16};
inline constexpr Dd kHalfPi{1.5707963267948966, 6.123233995736766e-17};
inline constexpr Dd kTwoPi{6.283185307179586, 2.4492935982947064e-16};
inline constexpr Dd kHalfLn2Pi{0.9189385332046728, -3.8782941580672414e-17};
inline constexpr Dd kSqrtPi{1.772453850905516, -7.666586499825799e-17};

inline Dd exp_dd(const Dd& x) {
    if (x.hi < -745.0) return from(0.0);
    if (x.hi > 709.0) return from(std::numeric_limits<double>::infinity());
    const double m = std::round(x.hi / kLn2.hi);
    const Dd r = sub(x, mul(kLn2, m));  // |r| <= ~0.35
    Dd sum = from(1.0);
    Dd term = from(1.0);
    for (int k = 1; k <= 26; ++k) {
        term = div(mul(term, r), double(k));
        sum = add(sum, term);
    }
    return {std::scalbn(sum.hi, int(m)), std::scalbn(sum.lo, int(m))};
}

inline Dd log_dd(const Dd& x) {
    // Newton from the double seed: y1 = y0 + (x e^{-y0} - 1).
    const double y0 = std::log(x.hi);
    const Dd e = exp_dd({-y0, 0.0});
    return add(from(y0), sub(mul(x, e), from(1.0)));
}

// sin and cos together, with 2*pi range reduction (adequate for the modest
// |x| <~ 1e3 this library produces).
inline void sincos_dd(const Dd& x, Dd& s, Dd& c) {
    Dd u = sub(x, mul(kTwoPi, std::round(x.hi / kTwoPi.hi)));
    const double kq = std::round(u.hi / kHalfPi.hi);
    u = sub(u, mul(kHalfPi, kq));  // |u| <= pi/4 + eps
    Dd ss = u, cc = from(1.0);
    Dd term = u;
    const Dd u2 = mul(u, u);
    for (int k = 1; k <= 14; ++k) {
        // extend alternating Taylor series of sin
        term = div(mul(term, u2), -double(2 * k) * double(2 * k + 1));
        ss = add(ss, term);
    }
    term = from(1.0);
    for (int k = 1; k <= 14; ++k) {
        term = div(mul(term, u2), -double(2 * k - 1) * double(2 * k));
        cc = add(cc, term);
    }
    const int q = int(kq) & 3;
    switch (q < 0 ? q + 4 : q) {
        case 0: s = ss; c = cc; break;
        case 1: s = cc; c = {-ss.hi, -ss.lo}; break;
        case 2: s = {-ss.hi, -ss.lo}; c = {-cc.hi, -cc.lo}; break;
        default: s = {-cc.hi, -cc.lo}; c = ss; break;
    }
}

inline Dd atan2_dd(const Dd& y, const Dd& x) {
    const double t0 = std::atan2(y.hi, x.hi);
    Dd s, c;
    sincos_dd(from(t0), s, c);
    // Newton: delta = (y cos - x sin) / (x cos + y sin).
    const Dd num = sub(mul(y, c), mul(x, s));
    const Dd den = add(mul(x, c), mul(y, s));
    const double d1 = num.hi / den.hi;
    const Dd r = sub(num, mul(den, d1));
    const double d2 = r.hi / den.hi;
    return add(add(from(t0), from(d1)), from(d2));
}

inline Cdd exp_cdd(const Cdd& z) {
    const Dd e = exp_dd(z.re);
    Dd s, c;
    sincos_dd(z.im, s, c);
    return {mul(e, c), mul(e, s)};
}

inline Cdd log_cdd(const Cdd& z) {
    const Dd n = add(mul(z.re, z.re), mul(z.im, z.im));
    return {div(log_dd(n), 2.0), atan2_dd(z.im, z.re)};
}

// Complex sine via sin(x + iy) = sin x cosh y + i cos x sinh y.
inline Cdd sin_cdd(const Cdd& z) {
    Dd s, c;
    sincos_dd(z.re, s, c);
    const Dd ep = exp_dd(z.im);
    const Dd em = exp_dd({-z.im.hi, -z.im.lo});
    const Dd ch = div(add(ep, em), 2.0);
    const Dd sh = div(sub(ep, em), 2.0);
    return {mul(s, ch), mul(c, sh)};
}

// Gamma(z) in double-double for Re z >= 0.5: shift by 24 then Stirling.
inline Cdd gamma_cdd_right(const Cdd& z) {
    static constexpr Dd kStirling[] = {
        {0.08333333333333333, 4.625929269271485e-18},
        {-0.002777777777777778, 1.0601087908747154e-19},
        {0.0007936507936507937, 6.883823317368282e-22},
        {-0.0005952380952380953, 5.36938218754726e-20},
        {0.0008417508417508417, 3.6870174889237694e-20},
        {-0.0019175269175269176, 1.0675702776872475e-19},
        {0.00641025641025641, 2.2240044563805217e-19},
        {-0.029550653594771242, 4.861760957508855e-19},
        {0.17964437236883057, -6.401600482710946e-19},
        {-1.3924322169059011, 1.5837056989230303e-17},
        {13.402864044168393, -6.154114101993966e-16},
        {-156.84828462600203, 9.391823141715389e-15},
        {2193.1033333333335, -1.3339255626002948e-13},
        {-36108.77125372499, 5.897583353514365e-13},
        {691472.268851313, 2.5585296305158e-11},
    };
    constexpr int kShift = 24;
    const Cdd s = {add(z.re, from(double(kShift))), z.im};
    const Cdd logs = log_cdd(s);
    // (s - 1/2) log s - s + (1/2) log(2 pi)
    Cdd ln = mul(Cdd{sub(s.re, from(0.5)), s.im}, logs);
    ln = {add(sub(ln.re, s.re), kHalfLn2Pi), sub(ln.im, s.im)};
    // + sum c_n s^{-(2n-1)}
    const Cdd inv = div(Cdd{from(1.0), from(0.0)}, s);
    const Cdd inv2 = mul(inv, inv);
    Cdd p = inv;
    for (const Dd& c : kStirling) {
        ln = add(ln, Cdd{mul(p.re, c), mul(p.im, c)});
        p = mul(p, inv2);
    }
    Cdd g = exp_cdd(ln);
    // divide back: Gamma(z) = Gamma(z + 24) / prod_{k=0}^{23} (z + k)
    Cdd prod = {from(1.0), from(0.0)};
    for (int k = 0; k < kShift; ++k) {
        prod = mul(prod, Cdd{add(z.re, from(double(k))), z.im});
    }
    return div(g, prod);
}

// 1/Gamma(z) in double-double; zero at the poles of Gamma.
inline Cdd rgamma_cdd(const Cdd& z) {
    const double zr = to_double(z.re), zi = to_double(z.im);
    if (std::abs(zi) < 1e-13 && zr < 0.5 &&
        std::abs(zr - std::round(zr)) < 1e-13) {
        return {from(0.0), from(0.0)};
    }
    if (zr >= 0.5) {
        return div(Cdd{from(1.0), from(0.0)}, gamma_cdd_right(z));
    }
    // Reflection: 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi.
    const Cdd pz = {mul(z.re, kPiDd), mul(z.im, kPiDd)};
    const Cdd s = sin_cdd(pz);
    const Cdd g = gamma_cdd_right({sub(from(1.0), z.re), {-z.im.hi, -z.im.lo}});
    const Cdd num = mul(s, g);
    return {div(num.re, kPiDd), div(num.im, kPiDd)};
}

}  // namespace dnls::dd
