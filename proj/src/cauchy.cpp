#include "dnls/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dnls::cauchy {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kQuadTarget = 1e-9;  // absolute error target per integral

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

// Gauss 7 / Kronrod 15 pair (QUADPACK qk15 abscissae, positive half).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
void gk15(const F& f, double a, double b, double& val, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kWgk[7] * fc, resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double fv = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
        resk += kWgk[j] * fv;
        if (j % 2 == 1) resg += kWg[j / 2] * fv;
    }
    val = resk * h;
    err = std::abs(resk - resg) * h;
}

// Bisect only while the absolute error estimate exceeds the cell budget.
// An absolute budget matters: a relative criterion never converges in cells
// where the integrand changes sign (tiny exact value, finite error floor).
template <typename F>
double adapt_cell(const F& f, double a, double b, double tol, int depth,
                  double& err_acc) {
    double v = 0.0, e = 0.0;
    gk15(f, a, b, v, e);
    if (e <= tol || depth >= 25 ||
        b - a < 1e-14 * (1.0 + std::abs(a))) {
        err_acc += e;
        return v;
    }
    const double m = 0.5 * (a + b);
    return adapt_cell(f, a, m, 0.5 * tol, depth + 1, err_acc) +
           adapt_cell(f, m, b, 0.5 * tol, depth + 1, err_acc);
}

// Composite adaptive quadrature segmented at the spline knots: kappa is only
// C^2 across knots, so a single global adaptive rule keeps subdividing at
// every knot; per-cell Gauss-Kronrod converges spectrally instead, and the
// bisection only fires in the cells touching the kernel's boundary layer.
template <typename F>
double gk_cells(F&& f, double a, double b, double origin, double step) {
    if (!(a < b)) return 0.0;
    double total = 0.0, err_sum = 0.0;
    double s = a;
    long k = static_cast<long>(std::floor((a - origin) / step)) + 1;
    const double cell_budget_rate = kQuadTarget / (b - a);
    while (s < b) {
        const double e = std::min(b, origin + step * double(k));
        if (e > s + 1e-15 * (1.0 + std::abs(s))) {
            total += adapt_cell(f, s, e, cell_budget_rate * (e - s), 0,
                                err_sum);
        }
        s = e;
        ++k;
    }
    if (err_sum > 4.0 * kQuadTarget) {
        throw Error(ErrCode::numeric,
                    "cauchy quadrature: error estimate " +
                        std::to_string(err_sum) + " above target");
    }
    return total;
}

struct Lattice {
    double origin, step;
};

template <typename F>
double gk(F&& f, double a, double b, Lattice lat) {
    return gk_cells(f, a, b, lat.origin, lat.step);
}

template <typename F>
cplx gk_cplx(F&& f, double a, double b, Lattice lat) {
    return {gk([&](double s) { return f(s).real(); }, a, b, lat),
            gk([&](double s) { return f(s).imag(); }, a, b, lat)};
}

Lattice lattice_of(const KappaFunction& kap) {
    return {kap.grid_origin(), kap.grid_step()};
}

}  // namespace

struct KappaFunction::Impl {
    Spline m;  // |rho(s)|^2 on the uniform grid
    double Z = 0.0;
    double kappa_left = 0.0, kappa_right = 0.0;  // kappa(-Z), kappa(+Z)

    double margin(double s) const { return 1.0 - s * m(s); }

    double kappa(double s) const {
        if (s > Z) return kappa_right * (Z / s) * (Z / s);
        if (s < -Z) return kappa_left * (Z / s) * (Z / s);
        const double g = margin(s);
        if (!(g > 0.0)) {
            throw Error(ErrCode::domain,
                        "kappa: 1 - s|rho(s)|^2 <= 0 (soliton-suspect data)");
        }
        return -std::log(g) / kTwoPi;
    }

    double dkappa(double s) const {
        if (s > Z) return -2.0 * kappa_right * Z * Z / (s * s * s);
        if (s < -Z) return -2.0 * kappa_left * Z * Z / (s * s * s);
        const double g = margin(s);
        if (!(g > 0.0)) {
            throw Error(ErrCode::domain,
                        "kappa: 1 - s|rho(s)|^2 <= 0 (soliton-suspect data)");
        }
        return (m(s) + s * m.prime(s)) / (kTwoPi * g);
    }
};

KappaFunction::KappaFunction(const scattering::ReflectionCoefficient& rc) {
    const size_t n = rc.z_grid.size();
    if (n < 4 || rc.rho.size() != n) {
        throw Error(ErrCode::invalid_argument, "kappa: degenerate rc grid");
    }
    const double h = rc.z_grid[1] - rc.z_grid[0];
    for (size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(rc.z_grid[i + 1] - rc.z_grid[i] - h) > 1e-9 * (1.0 + h)) {
            throw Error(ErrCode::invalid_argument,
                        "kappa: rc grid must be uniform");
        }
    }
    if (!(rc.c_margin > 0.0)) {
        throw Error(ErrCode::domain, "kappa: c_margin <= 0 (soliton-suspect)");
    }
    std::vector<double> m(n);
    for (size_t i = 0; i < n; ++i) m[i] = std::norm(rc.rho[i]);

    auto impl = std::make_shared<Impl>();
    impl->m = Spline(m.data(), n, rc.z_grid.front(), h);
    impl->Z = std::max(std::abs(rc.z_grid.front()), std::abs(rc.z_grid.back()));
    impl->kappa_left =
        -std::log(1.0 - rc.z_grid.front() * m.front()) / kTwoPi;
    impl->kappa_right =
        -std::log(1.0 - rc.z_grid.back() * m.back()) / kTwoPi;
    Z_ = impl->Z;
    origin_ = rc.z_grid.front();
    step_ = h;
    node_values_.resize(n);
    for (size_t i = 0; i < n; ++i) {
        node_values_[i] = -std::log(1.0 - rc.z_grid[i] * m[i]) / kTwoPi;
        sup_norm_ = std::max(sup_norm_, std::abs(node_values_[i]));
    }
    impl_ = std::move(impl);
}

double KappaFunction::operator()(double s) const { return impl_->kappa(s); }
double KappaFunction::derivative(double s) const { return impl_->dkappa(s); }

double kappa_eval(const scattering::ReflectionCoefficient& rc, double s) {
    return KappaFunction(rc)(s);
}

namespace {

// int_{-inf}^{-Z} kappa(-Z)(Z/s)^2 / (s - z) ds in closed form
// = kappa(-Z) * ( -1/2 + u/3 - u^2/4 + ... ) for small u = z/Z, else the
// exact log expression; the principal log is continuous off the cuts.
cplx tail_left(double kappaL, double Z, cplx z) {
    const cplx u = z / Z;
    if (std::abs(u) < 0.05) {
        cplx sum = -0.5, pw = 1.0;
        for (int k = 1; k < 12; ++k) {
            pw *= -u;
            sum += -pw / double(k + 2);
        }
        return kappaL * sum;
    }
    return kappaL * Z * Z *
           (std::log(1.0 + u) / (z * z) - 1.0 / (z * Z));
}

// int_{+Z}^{+inf} kappa(Z)(Z/s)^2 / (s - z) ds
// = kappa(Z) * ( 1/2 + u/3 + u^2/4 + ... ) for small u, else exact logs.
cplx tail_right(double kappaR, double Z, cplx z) {
    const cplx u = z / Z;
    if (std::abs(u) < 0.05) {
        cplx sum = 0.5, pw = 1.0;
        for (int k = 1; k < 12; ++k) {
            pw *= u;
            sum += pw / double(k + 2);
        }
        return kappaR * sum;
    }
    return kappaR * Z * Z *
           (-std::log(1.0 - u) / (z * z) - 1.0 / (z * Z));
}

// int_a^b kappa(s)/(s - z) ds for z off [a, b]; near-cut evaluations use the
// subtraction kappa(s) -> kappa(s) - kappa(clamp(Re z)) plus exact logs.
cplx cauchy_finite(const KappaFunction& kap, double a, double b, cplx z) {
    if (!(a < b)) return 0.0;
    const Lattice lat = lattice_of(kap);
    const bool near_cut =
        std::abs(z.imag()) < 0.5 && z.real() > a - 1.0 && z.real() < b + 1.0;
    if (!near_cut) {
        return gk_cplx([&](double s) { return kap(s) / (s - z); }, a, b, lat);
    }
    const double zr = std::clamp(z.real(), a, b);
    const double kz = kap(zr);
    auto f = [&](double s) -> cplx {
        const double num = kap(s) - kz;
        if (std::abs(s - zr) < 1e-9 && std::abs(z.imag()) < 1e-12) {
            return kap.derivative(zr);
        }
        return num / (s - z);
    };
    // Split at the subtraction point so the residual boundary layer sits at
    // an interval endpoint, where bisection homes in on it.
    return gk_cplx(f, a, zr, lat) + gk_cplx(f, zr, b, lat) +
           kz * (std::log(b - z) - std::log(a - z));
}

double cut_distance(double xi, cplx z, Side side) {
    if (side == Side::left) {
        return z.real() <= xi ? std::abs(z.imag()) : std::abs(z - xi);
    }
    return z.real() >= xi ? std::abs(z.imag()) : std::abs(z - xi);
}

}  // namespace

cplx delta_eval(const KappaFunction& kap, double xi, cplx z, Side side) {
    if (cut_distance(xi, z, side) < 1e-6) {
        throw Error(ErrCode::invalid_argument,
                    "delta_eval: z within 1e-6 of the cut; use the "
                    "delta0 (z-xi)^{i kappa} local model instead");
    }
    const double Z = kap.z_max();
    if (std::abs(xi) > Z) {
        throw Error(ErrCode::invalid_argument,
                    "delta_eval: xi outside the rc grid");
    }
    if (side == Side::left) {
        const cplx val =
            tail_left(kap(-Z), Z, z) + cauchy_finite(kap, -Z, xi, z);
        return std::exp(I * val);
    }
    const cplx val =
        cauchy_finite(kap, xi, Z, z) + tail_right(kap(Z), Z, z);
    return std::exp(-I * val);
}

cplx delta_eval(const scattering::ReflectionCoefficient& rc, double xi, cplx z,
                Side side) {
    return delta_eval(KappaFunction(rc), xi, z, side);
}

cplx delta0_eval(const KappaFunction& kap, double xi, Side side) {
    const double Z = kap.z_max();
    if (!(xi - 1.0 >= -Z && xi + 1.0 <= Z)) {
        throw Error(ErrCode::invalid_argument,
                    "delta0_eval: xi must sit at least 1 inside the grid");
    }
    const double kxi = kap(xi);
    auto subtracted = [&](double s) -> double {
        if (std::abs(s - xi) < 1e-9) return kap.derivative(xi);
        return (kap(s) - kxi) / (s - xi);
    };
    const Lattice lat = lattice_of(kap);
    if (side == Side::left) {
        double val = tail_left(kap(-Z), Z, cplx(xi)).real();
        val +=
            gk([&](double s) { return kap(s) / (s - xi); }, -Z, xi - 1.0, lat);
        val += gk(subtracted, xi - 1.0, xi, lat);
        return std::exp(I * val);
    }
    double val = gk(subtracted, xi, xi + 1.0, lat);
    val += gk([&](double s) { return kap(s) / (s - xi); }, xi + 1.0, Z, lat);
    val += tail_right(kap(Z), Z, cplx(xi)).real();
    return std::exp(kPi * kxi) * std::exp(-I * val);
}

cplx delta0_eval(const scattering::ReflectionCoefficient& rc, double xi,
                 Side side) {
    return delta0_eval(KappaFunction(rc), xi, side);
}

cplx Delta_eval(const KappaFunction& kap, double z) {
    const double Z = kap.z_max();
    if (!(std::abs(z) < Z)) {
        throw Error(ErrCode::invalid_argument,
                    "Delta_eval: z must lie strictly inside the grid");
    }
    const double kz = kap(z);
    auto subtracted = [&](double s) -> double {
        if (std::abs(s - z) < 1e-9) return kap.derivative(z);
        return (kap(s) - kz) / (s - z);
    };
    // p.v. int_{-Z}^{Z} kappa/(s-z) ds + tails
    const Lattice lat = lattice_of(kap);
    double P = gk(subtracted, -Z, z, lat) + gk(subtracted, z, Z, lat) +
               kz * std::log((Z - z) / (Z + z));
    P += tail_left(kap(-Z), Z, cplx(z)).real();
    P += tail_right(kap(Z), Z, cplx(z)).real();
    // Delta = exp( (1/(pi i)) * pv int kappa/(z - s) ds ) = exp(i P / pi).
    return std::exp(I * P / kPi);
}

double kappa_over_s_integral(const KappaFunction& kap, double a, double b) {
    if (!(a < b)) return 0.0;
    const double Z = kap.z_max();
    double total = 0.0;
    // Closed-form tails of the kappa(+-Z)(Z/s)^2 model:
    // int kappa(Z) Z^2 / s^3 ds.
    if (a < -Z) {
        const double hi = std::min(b, -Z);
        total += kap(-Z) * Z * Z * 0.5 *
                 ((std::isinf(a) ? 0.0 : 1.0 / (a * a)) - 1.0 / (hi * hi));
    }
    if (b > Z) {
        const double lo = std::max(a, Z);
        total += kap(Z) * Z * Z * 0.5 *
                 ((std::isinf(b) ? 0.0 : -1.0 / (b * b)) + 1.0 / (lo * lo));
    }
    const double fa = std::max(a, -Z), fb = std::min(b, Z);
    auto f = [&](double s) {
        // kappa(s)/s -> kappa'(0) as s -> 0 (first-order zero).
        return std::abs(s) < 1e-9 ? kap.derivative(s) : kap(s) / s;
    };
    total += gk(f, fa, fb, lattice_of(kap));
    return total;
}

cplx breve_rho(const scattering::ReflectionCoefficient& rc, double z) {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < rc.z_grid.size(); ++i) {
        const double d = std::abs(rc.z_grid[i] - z);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    if (best_d > 1e-9) {
        throw Error(ErrCode::invalid_argument,
                    "breve_rho: z must be a grid node");
    }
    const KappaFunction kap(rc);
    return rc.rho[best] / Delta_eval(kap, rc.z_grid[best]);
}

}  // namespace dnls::cauchy
