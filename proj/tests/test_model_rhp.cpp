// Tests for the parabolic-cylinder model RHP layer. Frozen reference values
// come from an independent 30-digit evaluation of the closed forms (mpmath),
// including full Phi matrices in both half planes for all four sign cases,
// the beta12 coefficients, and the freeze() assemblies against the sampled
// 0.45-Gaussian reflection coefficient.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "dnls/cauchy.hpp"
#include "dnls/model_rhp.hpp"

using namespace dnls;
using namespace dnls::model_rhp;

namespace {

constexpr double kPi = std::numbers::pi;

// Synthetic frozen data with the spectral normalization
// 1 - xi |r|^2 = e^{-2 pi kappa} and phase arg r = 0.7.
FrozenData synthetic_fd(SignCase c, double kappa, double xi) {
    const double r2 = (1.0 - std::exp(-2.0 * kPi * kappa)) / xi;
    return {xi, kappa, std::sqrt(r2) * std::polar(1.0, 0.7), c};
}

FrozenData case_fd(SignCase c) {
    const bool neg = (c == SignCase::pp || c == SignCase::mm);
    return synthetic_fd(c, neg ? -0.3 : 0.3, neg ? -2.0 : 2.0);
}

void check_entry(cplx got, double re, double im, double tol = 1e-8) {
    const cplx want(re, im);
    CHECK(std::abs(got - want) <= tol * (1.0 + std::abs(want)));
}

// 0.45-Gaussian reflection data sampled like the cauchy tests.
scattering::ReflectionCoefficient gaussian_rc() {
    scattering::ReflectionCoefficient rc;
    const int half = 1024;
    const double h = 8.0 / half;
    for (int i = -half; i <= half; ++i) {
        const double z = i * h;
        rc.z_grid.push_back(z);
        rc.rho.push_back(cplx(0.45 * std::exp(-z * z / 4.0), 0.0));
    }
    rc.c_margin = 0.5;
    return rc;
}

}  // namespace

TEST_CASE("beta12 closed form matches the frozen oracle, all four cases") {
    auto ms_pp = model_solution(case_fd(SignCase::pp));
    check_entry(ms_pp.beta12, -0.38613813381183093, -0.029955660839256583,
                1e-10);
    auto ms_pm = model_solution(case_fd(SignCase::pm));
    check_entry(ms_pm.beta12, -0.057003448152038186, 0.014447266635731393,
                1e-10);
    auto ms_mp = model_solution(case_fd(SignCase::mp));
    check_entry(ms_mp.beta12, -0.19728983842081171, 2.543129675444025, 1e-10);
    auto ms_mm = model_solution(case_fd(SignCase::mm));
    check_entry(ms_mm.beta12, 0.09515059325449911, 0.3754282416165796, 1e-10);

    // |beta12|^2 = kappa/xi for the pure-sign cases (normalized data); the
    // mixed cases carry e^{-+4 pi kappa}.
    CHECK(std::abs(std::norm(ms_pp.beta12) - (-0.3) / (-2.0)) < 1e-12);
    CHECK(std::abs(std::norm(ms_mm.beta12) - (-0.3) / (-2.0)) < 1e-12);
    CHECK(std::abs(std::norm(ms_pm.beta12) -
                   0.15 * std::exp(-4.0 * kPi * 0.3)) < 1e-12);
    CHECK(std::abs(std::norm(ms_mp.beta12) -
                   0.15 * std::exp(4.0 * kPi * 0.3)) < 1e-10);

    // beta12 beta21 = kappa by construction.
    CHECK(std::abs(ms_pp.beta12 * ms_pp.beta21 - cplx(-0.3)) < 1e-14);
}

TEST_CASE("frozen Phi matrices, case (+,+)") {
    auto ms = model_solution(case_fd(SignCase::pp));
    Mat2 m = phi_eval(ms, cplx(1.0, 1.0));
    check_entry(m.a11, 2.228440441385155, 0.011460580730316593);
    check_entry(m.a12, 0.04731431765448187, 0.0883348338639727);
    check_entry(m.a21, 1.823892291167351, 0.22020808773885306);
    check_entry(m.a22, 0.47912346360156, 0.07451003927294014);
    CHECK(std::abs(m.det() - cplx(1.0)) < 1e-10);
    m = phi_eval(ms, cplx(1.0, -0.5));
    check_entry(m.a11, 0.6391619981539319, -0.19171236127477104);
    check_entry(m.a12, -1.1272106837003935, -0.07316746345957476);
    check_entry(m.a21, -0.05108999479771033, 0.311639471967984);
    check_entry(m.a22, 1.7004373624391271, -0.03371657740407585);
    CHECK(std::abs(m.det() - cplx(1.0)) < 1e-10);
}

TEST_CASE("frozen Phi matrices, case (+,-)") {
    auto ms = model_solution(case_fd(SignCase::pm));
    Mat2 m = phi_eval(ms, cplx(0.6, 0.7));
    check_entry(m.a11, 0.8194374175744604, 0.0038808848451376103);
    check_entry(m.a12, 0.040070177772688426, 0.012875782184101457);
    check_entry(m.a21, -3.6539153335881918, -0.873084918381115);
    check_entry(m.a22, 1.0548953486110229, -0.10510334452529324);
    CHECK(std::abs(m.det() - cplx(1.0)) < 1e-10);
    m = phi_eval(ms, cplx(0.6, -0.7));
    check_entry(m.a11, 0.16017088126201084, 0.015958450606846343);
    check_entry(m.a12, -0.2773975825223766, 0.06628277438980298);
    check_entry(m.a21, 0.5278093473342378, -0.16960139856530604);
    check_entry(m.a22, 5.396865606695948, -0.02555974806015922);
    CHECK(std::abs(m.det() - cplx(1.0)) < 1e-10);
}

TEST_CASE("frozen Phi matrices, case (-,+)") {
    auto ms = model_solution(case_fd(SignCase::mp));
    Mat2 m = phi_eval(ms, cplx(-1.2, 0.4));
    check_entry(m.a11, 2.425861045478008, 1.0448261298683317);
    check_entry(m.a12, 0.49911630383286426, 0.23963784509344066);
    check_entry(m.a21, 0.01409825117886162, 0.36564899101291576);
    check_entry(m.a22, 0.34753727608398777, -0.0730611425825587);
    CHECK(std::abs(m.det() - cplx(1.0)) < 1e-10);
    m = phi_eval(ms, cplx(-1.2, -0.4));
    check_entry(m.a11, 2.288902034635287, 0.4811852121140057);
    check_entry(m.a12, 0.04642597791480829, -1.204093455703935);
    check_entry(m.a21, 0.15156744854816032, -0.07277120878935414);
    check_entry(m.a22, 0.3683325573337687, -0.15864201335889574);
    CHECK(std::abs(m.det() - cplx(1.0)) < 1e-10);
}

TEST_CASE("frozen Phi matrices, case (-,-)") {
    auto ms = model_solution(case_fd(SignCase::mm));
    Mat2 m = phi_eval(ms, cplx(-0.8, 0.3));
    check_entry(m.a11, 0.6491329044018709, -0.10223022100671261);
    check_entry(m.a12, 0.538649330593237, 0.031115732100799823);
    check_entry(m.a21, 0.36882070870629835, -0.8359175442059494);
    check_entry(m.a22, 1.9448514829794474, -0.3696742234061238);
    CHECK(std::abs(m.det() - cplx(1.0)) < 1e-10);
    m = phi_eval(ms, cplx(-0.8, -0.3));
    check_entry(m.a11, 1.9448514829794474, 0.3696742234061238);
    check_entry(m.a12, -0.18441035435314918, -0.4179587721029747);
    check_entry(m.a21, -1.077298661186474, 0.06223146420159965);
    check_entry(m.a22, 0.6491329044018709, 0.10223022100671261);
    CHECK(std::abs(m.det() - cplx(1.0)) < 1e-10);
}

TEST_CASE("jump residual small on the spec grid, all cases") {
    const double zetas[] = {-10.0, -5.0, -2.0, -1.0, -0.5,
                            0.5,   1.0,  2.0,  5.0,  10.0};
    for (SignCase c :
         {SignCase::pp, SignCase::pm, SignCase::mp, SignCase::mm}) {
        const bool neg = (c == SignCase::pp || c == SignCase::mm);
        for (double ka : {0.05, 0.3, 1.0}) {
            auto ms = model_solution(
                synthetic_fd(c, neg ? -ka : ka, neg ? -2.0 : 2.0));
            for (double z : zetas) {
                CAPTURE(int(c));
                CAPTURE(ka);
                CAPTURE(z);
                CHECK(jump_residual(ms, z) <= 1e-8);
            }
        }
    }
}

TEST_CASE("jump residual is even in zeta") {
    auto ms = model_solution(case_fd(SignCase::pp));
    for (double z : {0.5, 1.0, 2.0, 5.0}) {
        CHECK(std::abs(jump_residual(ms, z) - jump_residual(ms, -z)) <= 1e-8);
    }
}

TEST_CASE("Wronskian route recovers beta12 to 1e-7") {
    for (SignCase c :
         {SignCase::pp, SignCase::pm, SignCase::mp, SignCase::mm}) {
        FrozenData fd = case_fd(c);
        const cplx b12 = beta12_eval(fd);
        // Evaluate Phi with beta12 = 1, beta21 = kappa; the 21-column scales
        // by 1/beta12, so W1 = Phi11^- Phi21^+ - Phi21^- Phi11^+ equals
        // beta12 * (-xi conj r) of the true solution.
        ModelSolution one{fd, cplx(1.0), cplx(fd.kappa)};
        for (double zr : {1.3, -0.7}) {
            const Mat2 p = phi_eval(one, cplx(zr, 0.0));
            const Mat2 mlo = phi_eval(one, cplx(zr, -1e-300));
            const cplx w1 = mlo.a11 * p.a21 - mlo.a21 * p.a11;
            const cplx b12_w = w1 / (-fd.xi * std::conj(fd.r_xi));
            CAPTURE(int(c));
            CAPTURE(zr);
            CHECK(std::abs(b12_w - b12) <= 1e-7 * (1.0 + std::abs(b12)));
        }
    }
}

// The normalization factor Phi tends to: e^{-(i/4)zeta^2 sigma3} zeta^{+i
// kappa sigma3} for t > 0 and its reciprocal for t < 0 (the D-pair swaps
// slots). N^PC multiplies by the inverse of that on the right.
Mat2 npc_right(const FrozenData& fd, cplx zeta) {
    const cplx e = std::exp(I * zeta * zeta / 4.0);
    const cplx zk = zeta_pow_ikappa(fd, zeta);
    if (t_positive(fd.sign_case)) {
        return {e / zk, cplx(0.0), cplx(0.0), zk / e};
    }
    return {zk / e, cplx(0.0), cplx(0.0), e / zk};
}

TEST_CASE("N^PC tends to I along arg zeta = pi/2") {
    // The first correction is [[0, -+i b12],[+-i b21, 0]]/zeta with
    // |b12|^2 = kappa/xi and |b21|^2 = kappa xi, so the 1e-3 target needs
    // sqrt(2 kappa)/40 < 1e-3: use |kappa| = 5e-4, |xi| = 1.
    const cplx zeta(0.0, 40.0);
    for (SignCase c :
         {SignCase::pp, SignCase::pm, SignCase::mp, SignCase::mm}) {
        const bool neg = (c == SignCase::pp || c == SignCase::mm);
        FrozenData fd =
            synthetic_fd(c, neg ? -5e-4 : 5e-4, neg ? -1.0 : 1.0);
        auto ms = model_solution(fd);
        const Mat2 n =
            phi_eval(ms, zeta) * p_matrix(fd, Sector::omega2) *
            npc_right(fd, zeta);
        CAPTURE(int(c));
        CHECK((n - Mat2::identity()).frobenius() <= 1e-3);
    }
}

TEST_CASE("N^PC first correction is -+i beta / zeta") {
    // beta = (i/2)[sigma3, m0] gives m0_12 = -i b12 (t>0), +i b12 (t<0).
    const cplx zeta(0.0, 40.0);
    for (SignCase c : {SignCase::pp, SignCase::mm}) {
        auto ms = model_solution(case_fd(c));
        const Mat2 n = phi_eval(ms, zeta) * npc_right(ms.frozen, zeta);
        const cplx sgn = t_positive(c) ? -I : I;
        CAPTURE(int(c));
        CHECK(std::abs(n.a12 * zeta - sgn * ms.beta12) <=
              0.05 * std::abs(ms.beta12));
        CHECK(std::abs(n.a21 * zeta + sgn * ms.beta21) <=
              0.05 * std::abs(ms.beta21));
    }
}

TEST_CASE("freeze() against the frozen Gaussian oracle") {
    auto rc = gaussian_rc();

    FrozenData fd = freeze(rc, -1.5, 2.0, SignCase::pp);
    CHECK(fd.kappa == doctest::Approx(-0.01496830678692603).epsilon(1e-8));
    check_entry(fd.r_xi, 0.17286260440538118, -0.18936906990914465, 1e-7);

    fd = freeze(rc, 1.2, 3.0, SignCase::pm);
    CHECK(fd.kappa == doctest::Approx(0.020034685086346517).epsilon(1e-8));
    check_entry(fd.r_xi, -0.008644086142174781, -0.2766845811263715, 1e-7);

    fd = freeze(rc, 1.5, -2.0, SignCase::mp);
    CHECK(fd.kappa == doctest::Approx(0.01652359323780853).epsilon(1e-8));
    check_entry(fd.r_xi, -0.1837976157769973, -0.21709905845955557, 1e-7);

    fd = freeze(rc, -1.2, -3.0, SignCase::mm);
    CHECK(fd.kappa == doctest::Approx(-0.01779232967211906).epsilon(1e-8));
    check_entry(fd.r_xi, -0.007778309981522283, -0.31385797699871454, 1e-7);
}

TEST_CASE("freeze() modulus structure and preconditions") {
    auto rc = gaussian_rc();
    dnls::cauchy::KappaFunction kap(rc);

    // |r| = |rho| for (+,+); x e^{-2 pi kappa} for (+,-); etc.
    const double rho15 = 0.45 * std::exp(-1.5 * 1.5 / 4.0);
    FrozenData pp = freeze(rc, -1.5, 2.0, SignCase::pp);
    CHECK(std::abs(pp.r_xi) == doctest::Approx(rho15).epsilon(1e-7));
    FrozenData pm = freeze(rc, 1.5, 2.0, SignCase::pm);
    const double k15 = kap(1.5);
    CHECK(std::abs(pm.r_xi) ==
          doctest::Approx(rho15 * std::exp(-2.0 * kPi * k15)).epsilon(1e-7));
    FrozenData mp = freeze(rc, 1.5, -2.0, SignCase::mp);
    CHECK(std::abs(mp.r_xi) ==
          doctest::Approx(rho15 * std::exp(2.0 * kPi * k15)).epsilon(1e-7));
    FrozenData mm = freeze(rc, -1.5, -2.0, SignCase::mm);
    CHECK(std::abs(mm.r_xi) == doctest::Approx(rho15).epsilon(1e-7));

    // |beta12|^2 = kappa/xi for pipeline data in every case.
    for (const FrozenData& fd : {pp, pm, mp, mm}) {
        CHECK(std::abs(std::norm(beta12_eval(fd)) - fd.kappa / fd.xi) <
              1e-9);
    }

    CHECK_THROWS_AS(freeze(rc, -1.5, 0.5, SignCase::pp), Error);   // |t| < 1
    CHECK_THROWS_AS(freeze(rc, -1.5, -2.0, SignCase::pp), Error);  // t sign
    CHECK_THROWS_AS(freeze(rc, 1.5, 2.0, SignCase::pp), Error);    // xi sign
    CHECK_THROWS_AS(freeze(rc, -7.5, 2.0, SignCase::pp), Error);   // edge

    // rho == 0 freezes to r = 0.
    scattering::ReflectionCoefficient zero = rc;
    for (auto& v : zero.rho) v = 0.0;
    CHECK(std::abs(freeze(zero, -1.5, 2.0, SignCase::pp).r_xi) == 0.0);
}

TEST_CASE("beta12 spec example and t-phase difference") {
    // kappa from 1 - s|rho|^2 = 0.75 at xi = 1, |r| = 0.5.
    const double kappa = 0.0457860238961933189;
    FrozenData fd{1.0, kappa, std::polar(0.5, 0.31), SignCase::pp};
    const cplx b12 = beta12_eval(fd);
    CHECK(std::abs(b12) == doctest::Approx(std::sqrt(kappa)).epsilon(1e-10));
    CHECK(std::abs(b12) == doctest::Approx(0.2139766).epsilon(1e-6));

    // arg beta12 carries 4 t xi^2 - kappa log(8t): difference two times.
    auto rc = gaussian_rc();
    const double xi = -1.5, t1 = 2.0, t2 = 3.5;
    const cplx b1 = beta12_eval(freeze(rc, xi, t1, SignCase::pp));
    const cplx b2 = beta12_eval(freeze(rc, xi, t2, SignCase::pp));
    dnls::cauchy::KappaFunction kap(rc);
    const double want =
        4.0 * (t2 - t1) * xi * xi - kap(xi) * std::log(t2 / t1);
    const cplx ratio = (b2 / b1) / std::abs(b2 / b1);
    CHECK(std::abs(ratio - std::polar(1.0, want)) < 1e-7);
}

TEST_CASE("degenerate kappa = 0 collapses to the exponential model") {
    FrozenData fd{-1.0, 0.0, cplx(0.0), SignCase::pp};
    CHECK(beta12_eval(fd) == cplx(0.0));
    auto ms = model_solution(fd);
    const cplx zeta(1.2, 0.8);
    const Mat2 m = phi_eval(ms, zeta);
    CHECK(std::abs(m.a12) == 0.0);
    CHECK(std::abs(m.a21) == 0.0);
    CHECK(std::abs(m.a11 - std::exp(-I * zeta * zeta / 4.0)) < 1e-12);
    CHECK(std::abs(m.a22 - std::exp(I * zeta * zeta / 4.0)) < 1e-12);
    CHECK(jump_residual(ms, 1.0) <= 1e-12);

    // r = 0 with kappa != 0 is a degenerate-input error.
    FrozenData bad{-1.0, -0.1, cplx(0.0), SignCase::pp};
    CHECK_THROWS_AS(beta12_eval(bad), Error);
}

TEST_CASE("p_matrix sector factors") {
    FrozenData fd = case_fd(SignCase::pp);
    const cplx r = fd.r_xi;
    const double g = 1.0 - fd.xi * std::norm(r);

    CHECK((p_matrix(fd, Sector::omega2) - Mat2::identity()).frobenius() ==
          0.0);
    CHECK((p_matrix(fd, Sector::omega5) - Mat2::identity()).frobenius() ==
          0.0);
    Mat2 p = p_matrix(fd, Sector::omega1);
    CHECK(std::abs(p.a21 - fd.xi * std::conj(r)) < 1e-15);
    CHECK(std::abs(p.a12) == 0.0);
    p = p_matrix(fd, Sector::omega4);
    CHECK(std::abs(p.a21 + fd.xi * std::conj(r) / g) < 1e-15);
    p = p_matrix(fd, Sector::omega3);
    CHECK(std::abs(p.a12 + r / g) < 1e-15);
    p = p_matrix(fd, Sector::omega6);
    CHECK(std::abs(p.a12 - r) < 1e-15);
    for (Sector s : {Sector::omega1, Sector::omega3, Sector::omega4,
                     Sector::omega6}) {
        CHECK(std::abs(p_matrix(fd, s).det() - cplx(1.0)) < 1e-15);
    }

    FrozenData zero{-1.0, 0.0, cplx(0.0), SignCase::pp};
    CHECK((p_matrix(zero, Sector::omega1) - Mat2::identity()).frobenius() ==
          0.0);
}

TEST_CASE("zeta power branch follows the case") {
    FrozenData pp = case_fd(SignCase::pp);  // principal branch
    FrozenData pm = case_fd(SignCase::pm);  // arg in [0, 2pi)
    const cplx zeta(0.0, -1.0);             // arg -pi/2 vs 3pi/2
    CHECK(std::abs(zeta_pow_ikappa(pp, zeta)) ==
          doctest::Approx(std::exp(pp.kappa * kPi / 2.0)).epsilon(1e-12));
    CHECK(std::abs(zeta_pow_ikappa(pm, zeta)) ==
          doctest::Approx(std::exp(-pm.kappa * 3.0 * kPi / 2.0))
              .epsilon(1e-12));
}

TEST_CASE("jump_residual preconditions") {
    auto ms = model_solution(case_fd(SignCase::pp));
    CHECK_THROWS_AS(jump_residual(ms, 0.0), Error);
    CHECK_THROWS_AS(jump_residual(ms, 51.0), Error);
}
