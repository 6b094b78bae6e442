// Pseudo-spectral evolution tests. Oracles: conservation laws (mass),
// the exact free-Schroedinger solution in the linear limit, the solver's
// own dt-refinement (4th-order self-convergence), and the conjugation
// time-reversal symmetry.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "dnls/pde.hpp"

using dnls::cplx;
using dnls::Error;
using namespace dnls::pde;

namespace {

constexpr double kPi = std::numbers::pi;

dnls::scattering::Potential gaussian(double amp, double x_half = 8.0,
                                     int n = 801) {
    return dnls::scattering::Potential::sample(
        [amp](double x) { return cplx(amp * std::exp(-x * x), 0.0); }, -x_half,
        x_half, n, 1e-9);
}

EvolveControls ctl(double l, int n, double dt) {
    EvolveControls c;
    c.l_box = l;
    c.n_fft = n;
    c.dt_max = dt;
    c.c_dt = 1.0;
    return c;
}

double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

}  // namespace

TEST_CASE("zero datum stays zero") {
    const auto q0 = dnls::scattering::Potential::sample(
        [](double) { return cplx(0.0); }, -8.0, 8.0, 17);
    const FieldState s = evolve_gi(q0, 10.0, ctl(100.0, 512, 0.05));
    double m = 0.0;
    for (const auto& v : s.field) m = std::max(m, std::abs(v));
    CHECK(m < 1e-14);
    CHECK(s.mass == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.time == 10.0);
}

TEST_CASE("mass conservation for the 0.3 Gaussian over T = 40") {
    // Radiation (linear plus nonlinear-generated) stays above 1e-8 out to
    // |x|/t ~ 25 for this datum, so T = 40 needs a ~2000-wide box.
    const auto q0 = gaussian(0.3);
    const FieldState s = evolve_gi(q0, 40.0, ctl(2048.0, 32768, 0.02));
    // Frozen initial mass: 0.09 sqrt(pi/2).
    const double mass_exact = 0.09 * std::sqrt(kPi / 2.0);
    CHECK(s.mass0 == doctest::Approx(mass_exact).epsilon(1e-9));
    CHECK(std::abs(s.mass - s.mass0) / s.mass0 < 1e-8);
}

TEST_CASE("linear limit matches the exact free evolution") {
    const double a = 1e-6;
    const auto q0 = dnls::scattering::Potential::sample(
        [a](double x) { return cplx(a * std::exp(-x * x), 0.0); }, -7.0, 7.0,
        2801, 1e-20);
    const double T = 5.0;
    const FieldState s = evolve_gi(q0, T, ctl(200.0, 4096, 0.05));
    // Free Schroedinger: a e^{-x^2} -> a / sqrt(1 + 4it) e^{-x^2/(1+4it)}.
    const cplx denom(1.0, 4.0 * T);
    double err = 0.0, sup = 0.0;
    for (size_t j = 0; j < s.field.size(); ++j) {
        const double x = s.x(j);
        const cplx exact = a / std::sqrt(denom) * std::exp(-x * x / denom);
        err = std::max(err, std::abs(s.field[j] - exact));
        sup = std::max(sup, std::abs(exact));
    }
    CHECK(err / sup < 1e-10);
}

TEST_CASE("self-convergence order of the time stepper is >= 3.8") {
    // Strong nonlinearity (amplitude 1) so the dt error is well above
    // roundoff; same grid throughout, so spatial error cancels in the
    // differences.
    const auto q0 = gaussian(0.5, 7.0, 1401);
    const double T = 2.0;
    auto c1 = ctl(100.0, 2048, 0.02);
    auto c2 = ctl(100.0, 2048, 0.01);
    auto c3 = ctl(100.0, 2048, 0.005);
    // The coarse runs are deliberately underresolved; relax the mass audit
    // so they finish and the dt error can be measured.
    c1.mass_tol = c2.mass_tol = c3.mass_tol = 1e-5;
    const auto s1 = evolve_gi(q0, T, c1);
    const auto s2 = evolve_gi(q0, T, c2);
    const auto s3 = evolve_gi(q0, T, c3);
    const double e1 = sup_diff(s1.field, s2.field);
    const double e2 = sup_diff(s2.field, s3.field);
    CAPTURE(e1);
    CAPTURE(e2);
    CHECK(e1 > 1e-13);  // measurable above roundoff
    const double order = std::log2(e1 / e2);
    CHECK(order >= 3.8);

    // At the working amplitude 0.3 and the default-size step, halving dt
    // moves the solution by well under 1e-6.
    const auto r1 = evolve_gi(gaussian(0.3, 7.0, 1401), T,
                              ctl(100.0, 2048, 0.01));
    const auto r2 = evolve_gi(gaussian(0.3, 7.0, 1401), T,
                              ctl(100.0, 2048, 0.005));
    CHECK(sup_diff(r1.field, r2.field) < 1e-6);
}

TEST_CASE("time reversal returns the initial datum") {
    const auto q0 = gaussian(0.3);
    const auto c = ctl(512.0, 8192, 0.01);
    const FieldState fwd = evolve_gi(q0, 10.0, c);
    const FieldState back = evolve_gi(fwd, 0.0, c);
    const FieldState init = evolve_gi(q0, 0.0, c);
    CHECK(sup_diff(back.field, init.field) < 1e-7);
    CHECK(back.time == 0.0);

    // Direct backward evolution, then forward again.
    const FieldState neg = evolve_gi(q0, -10.0, c);
    CHECK(neg.time == -10.0);
    CHECK(std::abs(neg.mass - neg.mass0) / neg.mass0 < 1e-8);
    const FieldState there_and_back = evolve_gi(neg, 0.0, c);
    CHECK(sup_diff(there_and_back.field, init.field) < 1e-7);
}

TEST_CASE("gauge maps: unimodularity, round trip, analytic midpoint") {
    const auto c = ctl(100.0, 1024, 0.01);
    FieldState u;
    u.l_box = 100.0;
    u.field.resize(1024);
    for (size_t j = 0; j < u.field.size(); ++j) {
        const double x = u.field.size() ? -50.0 + 100.0 * j / 1024.0 : 0.0;
        u.field[j] = 0.3 * std::exp(-x * x) * std::polar(1.0, 0.2 * x);
    }
    const FieldState q = gauge_forward(u);
    for (size_t j = 0; j < u.field.size(); ++j)
        CHECK(std::abs(std::abs(q.field[j]) - std::abs(u.field[j])) < 1e-14);
    const FieldState rt = gauge_inverse(q);
    CHECK(sup_diff(rt.field, u.field) < 1e-10);
    // At x = 0 the cumulative integral is half the total mass
    // 0.09 sqrt(pi/2) (symmetric |u|^2).
    const size_t mid = 512;
    const cplx expect =
        u.field[mid] * std::polar(1.0, -0.045 * std::sqrt(kPi / 2.0));
    CHECK(std::abs(q.field[mid] - expect) < 1e-10);
    // Zero field maps to zero.
    FieldState z;
    z.l_box = 100.0;
    z.field.assign(1024, cplx(0.0));
    const FieldState zq = gauge_forward(z);
    for (const auto& v : zq.field) CHECK(std::abs(v) == 0.0);
    (void)c;
}

TEST_CASE("snapshots and ray probe") {
    const auto q0 = gaussian(0.3);
    const auto states =
        evolve_gi_snapshots(q0, {5.0, 10.0}, ctl(512.0, 8192, 0.02));
    REQUIRE(states.size() == 2);
    CHECK(states[0].time == 5.0);
    CHECK(states[1].time == 10.0);
    for (const auto& s : states)
        CHECK(std::abs(s.mass - s.mass0) / s.mass0 < 1e-8);

    // xi = -0.25 samples x = t: arithmetic of the ray.
    const auto probe = ray_probe(states, -0.25);
    REQUIRE(probe.size() == 2);
    CHECK(probe[0].t == 5.0);
    // Cross-check the interpolation against the nearest grid node.
    const auto& s = states[1];
    const double x_target = 10.0;
    size_t jn = 0;
    double best = 1e300;
    for (size_t j = 0; j < s.field.size(); ++j) {
        if (std::abs(s.x(j) - x_target) < best) {
            best = std::abs(s.x(j) - x_target);
            jn = j;
        }
    }
    CHECK(std::abs(probe[1].q - s.field[jn]) < 5e-3 * std::abs(s.field[jn]) + 1e-9);

    // Zero field probes to zeros.
    FieldState z;
    z.l_box = 512.0;
    z.time = 4.0;
    z.field.assign(8192, cplx(0.0));
    const auto pz = ray_probe({z}, -0.5);
    CHECK(std::abs(pz[0].q) == 0.0);

    // Ray outside the box.
    CHECK_THROWS_AS(ray_probe(states, -12.0), Error);
}

TEST_CASE("error paths") {
    const auto q0 = gaussian(0.3);
    // n_fft not a power of two.
    CHECK_THROWS_AS(evolve_gi(q0, 1.0, ctl(100.0, 1000, 0.01)), Error);
    // Potential window outside the box.
    CHECK_THROWS_AS(evolve_gi(q0, 1.0, ctl(10.0, 512, 0.01)), Error);
    // Box too small for the dispersing field: wrap-around detection.
    CHECK_THROWS_AS(evolve_gi(q0, 20.0, ctl(20.0, 512, 0.02)), Error);
    // Snapshot time validation.
    CHECK_THROWS_AS(
        evolve_gi_snapshots(q0, {5.0, -10.0}, ctl(512.0, 8192, 0.02)), Error);
    CHECK_THROWS_AS(
        evolve_gi_snapshots(q0, {5.0, 5.0}, ctl(512.0, 8192, 0.02)), Error);
}
