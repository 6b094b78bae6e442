#include "dnls/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "json.hpp"

namespace dnls::scattering {
namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

// Complex-valued potential interpolant on the uniform grid.
class PotentialSpline {
public:
    explicit PotentialSpline(const Potential& q) {
        std::vector<double> re(q.samples.size()), im(q.samples.size());
        for (size_t i = 0; i < q.samples.size(); ++i) {
            re[i] = q.samples[i].real();
            im[i] = q.samples[i].imag();
        }
        const double h = (q.x_max - q.x_min) / (q.n - 1);
        re_ = Spline(re.data(), re.size(), q.x_min, h);
        im_ = Spline(im.data(), im.size(), q.x_min, h);
    }
    cplx operator()(double x) const { return {re_(x), im_(x)}; }

private:
    Spline re_, im_;
};

// Adaptive Dormand-Prince 5(4) for N complex components.
template <int N, typename Rhs>
std::array<cplx, N> dp54(Rhs&& rhs, double x0, double x1,
                         std::array<cplx, N> y, double tol, cplx zeta) {
    // Butcher tableau (classic dopri5 coefficients).
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double span = x1 - x0;
    double x = x0;
    double h = span / 100.0;
    const double hmin = std::abs(span) * 1e-14;
    std::array<cplx, N> k1 = rhs(x, y);
    while (x < x1) {
        if (x + h > x1) h = x1 - x;
        std::array<cplx, N> y2, y3, y4, y5, y6, y7;
        for (int i = 0; i < N; ++i) y2[i] = y[i] + h * a21 * k1[i];
        auto k2 = rhs(x + c2 * h, y2);
        for (int i = 0; i < N; ++i)
            y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        auto k3 = rhs(x + c3 * h, y3);
        for (int i = 0; i < N; ++i)
            y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        auto k4 = rhs(x + c4 * h, y4);
        for (int i = 0; i < N; ++i)
            y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                a54 * k4[i]);
        auto k5 = rhs(x + c5 * h, y5);
        for (int i = 0; i < N; ++i)
            y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                a64 * k4[i] + a65 * k5[i]);
        auto k6 = rhs(x + h, y6);
        for (int i = 0; i < N; ++i)
            y7[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                b5 * k5[i] + b6 * k6[i]);
        auto k7 = rhs(x + h, y7);

        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc =
                tol * (1.0 + std::max(std::abs(y[i]), std::abs(y7[i])));
            err += std::norm(e / sc);
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            x += h;
            y = y7;
            k1 = k7;  // FSAL
        }
        const double fac =
            std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= fac;
        if (h < hmin) {
            throw Error(ErrCode::numeric,
                        "jost integration: step underflow at zeta = (" +
                            std::to_string(zeta.real()) + ", " +
                            std::to_string(zeta.imag()) + ")");
        }
    }
    return y;
}

// Analytic continuation of a(zeta) to Im zeta^2 < 0: only the second
// column of Y enters, w = (Y12, Y22), w(x_min) = (0, 1), a = w2(x_max).
// The off-diagonal phase has Re(-2i zeta^2) = 2 Im zeta^2 < 0 there, so the
// integration is stable.
cplx a_continued(const PotentialSpline& qs, const Potential& q, cplx zeta,
                 double tol) {
    const cplx z2 = zeta * zeta;
    auto rhs = [&](double x, const std::array<cplx, 2>& w) {
        const cplx qq = qs(x);
        const cplx qb = std::conj(qq);
        const double m2 = std::norm(qq);
        const cplx c11 = cplx(0.0, -0.5 * m2);
        const cplx c22 = cplx(0.0, 0.5 * m2);
        const cplx c12 = zeta * qq;
        const cplx c21 = zeta * qb;
        return std::array<cplx, 2>{
            -2.0 * I * z2 * w[0] + c11 * w[0] + c12 * w[1],
            c21 * w[0] + c22 * w[1]};
    };
    const auto w = dp54<2>(rhs, q.x_min, q.x_max, {cplx(0.0), cplx(1.0)},
                           tol, zeta);
    return w[1];
}

nlohmann::json cplx_array_json(const std::vector<cplx>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const cplx& c : v) arr.push_back({c.real(), c.imag()});
    return arr;
}

std::vector<cplx> cplx_array_parse(const nlohmann::json& arr) {
    std::vector<cplx> out;
    out.reserve(arr.size());
    for (const auto& p : arr) out.emplace_back(p.at(0).get<double>(),
                                               p.at(1).get<double>());
    return out;
}

}  // namespace

Potential Potential::create(std::vector<cplx> samples, double x_min,
                            double x_max, double tail_tol) {
    if (samples.size() < 2 || !(x_min < x_max)) {
        throw Error(ErrCode::invalid_argument,
                    "Potential: need n >= 2 samples and x_min < x_max");
    }
    const double tail =
        std::max(std::abs(samples.front()), std::abs(samples.back()));
    if (tail > tail_tol) {
        throw Error(ErrCode::invalid_argument,
                    "Potential: boundary samples exceed tail_tol (window too "
                    "small for this datum)");
    }
    Potential q;
    q.n = static_cast<int>(samples.size());
    q.samples = std::move(samples);
    q.x_min = x_min;
    q.x_max = x_max;
    q.tail_tol = tail_tol;
    return q;
}

TransitionSample jost_transition(const Potential& q, cplx zeta,
                                 const ScatterOptions& opt) {
    const cplx z2 = zeta * zeta;
    if (std::abs(z2.imag()) > 1e-12 * (1.0 + std::abs(z2))) {
        throw Error(ErrCode::invalid_argument,
                    "jost_transition: zeta must satisfy Im zeta^2 = 0");
    }
    const PotentialSpline qs(q);
    auto rhs = [&](double x, const std::array<cplx, 4>& y) {
        const cplx qq = qs(x);
        const cplx qb = std::conj(qq);
        const double m2 = std::norm(qq);
        const cplx c11 = cplx(0.0, -0.5 * m2);
        const cplx c22 = cplx(0.0, 0.5 * m2);
        const cplx c12 = zeta * qq;
        const cplx c21 = zeta * qb;
        // y = (Y11, Y12, Y21, Y22)
        return std::array<cplx, 4>{
            c11 * y[0] + c12 * y[2],
            -2.0 * I * z2 * y[1] + c11 * y[1] + c12 * y[3],
            2.0 * I * z2 * y[2] + c21 * y[0] + c22 * y[2],
            c21 * y[1] + c22 * y[3]};
    };
    const auto m = dp54<4>(rhs, q.x_min, q.x_max,
                           {cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)},
                           opt.ode_tol, zeta);
    TransitionSample t;
    t.zeta = zeta;
    t.a = m[3];
    t.a_breve = m[0];
    t.b_breve = -m[1] * std::exp(2.0 * I * q.x_max * z2);
    t.b = -m[2] * std::exp(-2.0 * I * q.x_max * z2);
    const double det_err = std::abs(t.a * t.a_breve - t.b * t.b_breve - 1.0);
    if (det_err > opt.det_tol) {
        throw Error(ErrCode::consistency,
                    "jost_transition: determinant relation violated by " +
                        std::to_string(det_err));
    }
    return t;
}

ReflectionCoefficient reflection_map(const Potential& q,
                                     const std::vector<double>& z_grid,
                                     const ScatterOptions& opt) {
    if (z_grid.size() < 2) {
        throw Error(ErrCode::invalid_argument, "reflection_map: empty grid");
    }
    const size_t m = z_grid.size();
    for (size_t i = 0; i + 1 < m; ++i) {
        if (!(z_grid[i] < z_grid[i + 1])) {
            throw Error(ErrCode::invalid_argument,
                        "reflection_map: grid must be strictly increasing");
        }
    }
    const double sym_tol = 1e-12 * (1.0 + std::abs(z_grid.back()));
    for (size_t i = 0; i < m; ++i) {
        if (std::abs(z_grid[i] + z_grid[m - 1 - i]) > sym_tol) {
            throw Error(ErrCode::invalid_argument,
                        "reflection_map: grid must be symmetric about 0");
        }
    }

    ReflectionCoefficient rc;
    rc.z_grid = z_grid;
    rc.rho.assign(m, cplx(0.0));
    ptrdiff_t zero_node = -1;
    for (size_t i = 0; i < m; ++i) {
        const double z = z_grid[i];
        if (z == 0.0) {
            zero_node = static_cast<ptrdiff_t>(i);
            continue;
        }
        const cplx zeta = z > 0 ? cplx(std::sqrt(z), 0.0)
                                : cplx(0.0, std::sqrt(-z));
        const TransitionSample t = jost_transition(q, zeta, opt);
        rc.rho[i] = t.b_breve / (zeta * t.a);
    }
    if (zero_node >= 0) {
        // Linear extrapolation through the two smallest-|z| neighbors (for a
        // symmetric grid these are +-h, so this is their average).
        std::vector<size_t> idx;
        for (size_t i = 0; i < m; ++i)
            if (static_cast<ptrdiff_t>(i) != zero_node) idx.push_back(i);
        std::sort(idx.begin(), idx.end(), [&](size_t p, size_t r) {
            return std::abs(z_grid[p]) < std::abs(z_grid[r]);
        });
        const double z1 = z_grid[idx[0]], z2 = z_grid[idx[1]];
        const cplx r1 = rc.rho[idx[0]], r2 = rc.rho[idx[1]];
        rc.rho[static_cast<size_t>(zero_node)] =
            r1 + (r2 - r1) * (0.0 - z1) / (z2 - z1);
    }
    rc.c_margin = 1.0;
    for (size_t i = 0; i < m; ++i) {
        rc.c_margin =
            std::min(rc.c_margin, 1.0 - z_grid[i] * std::norm(rc.rho[i]));
    }
    rc.soliton_suspect = !(rc.c_margin > 0.0);
    return rc;
}

cplx rho_interp(const ReflectionCoefficient& rc, double z) {
    using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
    const size_t n = rc.z_grid.size();
    if (n < 5 || rc.rho.size() != n) {
        throw Error(ErrCode::invalid_argument, "rho_interp: degenerate grid");
    }
    const double h = rc.z_grid[1] - rc.z_grid[0];
    if (!(z >= rc.z_grid.front() && z <= rc.z_grid.back())) {
        throw Error(ErrCode::range, "rho_interp: z outside the grid");
    }
    std::vector<double> re(n), im(n);
    for (size_t i = 0; i < n; ++i) {
        re[i] = rc.rho[i].real();
        im[i] = rc.rho[i].imag();
    }
    Spline sr(re.data(), n, rc.z_grid.front(), h);
    Spline si(im.data(), n, rc.z_grid.front(), h);
    return {sr(z), si(z)};
}

SolitonFreeReport soliton_free_report(const ReflectionCoefficient& rc,
                                      const Potential& q,
                                      const ScatterOptions& opt) {
    SolitonFreeReport rep;
    rep.c_margin = rc.c_margin;

    const double Z = std::abs(rc.z_grid.back());
    const double H = opt.contour_depth;
    const double eps = opt.contour_eps;
    const std::array<cplx, 5> corners = {
        cplx(-Z, -eps), cplx(Z, -eps), cplx(Z, -H), cplx(-Z, -H),
        cplx(-Z, -eps)};
    const int per_side = std::max(opt.contour_samples / 4, 8);

    const PotentialSpline qs(q);
    double total = 0.0;
    double min_abs = std::numeric_limits<double>::infinity();
    cplx prev{}, first{};
    bool have_prev = false;
    for (int side = 0; side < 4; ++side) {
        for (int k = 0; k < per_side; ++k) {
            const double s = double(k) / per_side;
            const cplx z = corners[side] + (corners[side + 1] - corners[side]) * s;
            // a depends on zeta only through zeta^2 (a(-zeta) = a(zeta)), so
            // any square root works; principal sqrt stays continuous off the
            // negative real axis, which the contour avoids.
            const cplx a = a_continued(qs, q, std::sqrt(z), opt.ode_tol);
            min_abs = std::min(min_abs, std::abs(a));
            if (have_prev) total += std::arg(a / prev);
            else first = a;
            prev = a;
            have_prev = true;
        }
    }
    total += std::arg(first / prev);  // close the loop
    rep.winding =
        static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
    rep.min_abs_a = min_abs;
    rep.inconclusive = min_abs < opt.wind_tol;
    return rep;
}

std::string to_json(const Potential& q) {
    nlohmann::json j;
    j["type"] = "potential";
    j["x_min"] = q.x_min;
    j["x_max"] = q.x_max;
    j["n"] = q.n;
    j["tail_tol"] = q.tail_tol;
    j["samples"] = cplx_array_json(q.samples);
    return j.dump();
}

std::string to_json(const ReflectionCoefficient& rc) {
    nlohmann::json j;
    j["type"] = "reflection";
    j["z_grid"] = rc.z_grid;
    j["rho"] = cplx_array_json(rc.rho);
    j["c_margin"] = rc.c_margin;
    j["soliton_suspect"] = rc.soliton_suspect;
    return j.dump();
}

Potential potential_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.at("type") != "potential") {
        throw Error(ErrCode::invalid_argument, "not a potential record");
    }
    return Potential::create(cplx_array_parse(j.at("samples")),
                             j.at("x_min").get<double>(),
                             j.at("x_max").get<double>(),
                             j.at("tail_tol").get<double>());
}

ReflectionCoefficient reflection_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.at("type") != "reflection") {
        throw Error(ErrCode::invalid_argument, "not a reflection record");
    }
    ReflectionCoefficient rc;
    rc.z_grid = j.at("z_grid").get<std::vector<double>>();
    rc.rho = cplx_array_parse(j.at("rho"));
    rc.c_margin = j.at("c_margin").get<double>();
    rc.soliton_suspect = j.at("soliton_suspect").get<bool>();
    return rc;
}

}  // namespace dnls::scattering
