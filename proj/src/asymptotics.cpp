#include "dnls/asymptotics.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "json.hpp"

#include "dnls/cauchy.hpp"
#include "dnls/specfun.hpp"

namespace dnls::asymptotics {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Nearby-ray representative for the removable x -> 0 limit of q_as.
constexpr double kXiEps = 1e-4;

using model_rhp::SignCase;

// arg alpha for the given case at (xi, kappa), using the delta_0 phase
// constants: e^{i S_l} = delta_{0l}^2, e^{i S_r} = e^{2 pi kappa}/delta_{0r}^2
// (both unimodular, so S_l = 2 arg delta_{0l} and S_r = -2 arg delta_{0r}).
double alpha_arg_eval(const cauchy::KappaFunction& kap, double xi,
                      double kappa, cplx rho, SignCase c) {
    const double arg_gamma =
        std::arg(specfun::gamma_complex(cplx(0.0, kappa)));
    if (model_rhp::t_positive(c)) {
        const double s_l =
            2.0 * std::arg(cauchy::delta0_eval(kap, xi, cauchy::Side::left));
        const double a1 = kPi / 4.0 + arg_gamma + std::arg(rho) + s_l;
        return c == SignCase::pp ? a1 : a1 - kPi;
    }
    const double s_r =
        -2.0 * std::arg(cauchy::delta0_eval(kap, xi, cauchy::Side::right));
    const double a1 = -kPi / 4.0 - arg_gamma + std::arg(rho) + s_r;
    return c == SignCase::mm ? a1 : a1 + kPi;
}

cplx alpha_eval_impl(const scattering::ReflectionCoefficient& rc,
                     const cauchy::KappaFunction& kap, double xi,
                     SignCase sign_case) {
    if (xi == 0.0) throw Error(ErrCode::invalid_argument, "xi must be nonzero");
    const cplx rho = scattering::rho_interp(rc, xi);
    const double kappa = kap(xi);
    if (rho == cplx(0.0)) return 0.0;
    const double mod_sq = kappa / (2.0 * xi);
    if (mod_sq < 0.0)
        throw Error(ErrCode::domain,
                    "kappa(xi)/xi < 0: modulus formula needs the spectral "
                    "sign condition");
    return std::polar(std::sqrt(mod_sq),
                      alpha_arg_eval(kap, xi, kappa, rho, sign_case));
}

// Composite Simpson mass int |q0|^2 dx on the uniform potential grid
// (trapezoid closure on the last interval when the node count is even).
double mass_integral(const scattering::Potential& q) {
    const size_t n = q.samples.size();
    const double h = (q.x_max - q.x_min) / static_cast<double>(n - 1);
    auto f = [&](size_t i) { return std::norm(q.samples[i]); };
    const size_t m = (n % 2 == 1) ? n : n - 1;  // odd node count for Simpson
    double s = f(0) + f(m - 1);
    for (size_t i = 1; i + 1 < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(i);
    double mass = s * h / 3.0;
    if (n % 2 == 0) mass += 0.5 * h * (f(n - 2) + f(n - 1));
    return mass;
}

const char* case_name(SignCase c) {
    switch (c) {
        case SignCase::pp: return "pp";
        case SignCase::pm: return "pm";
        case SignCase::mp: return "mp";
        default: return "mm";
    }
}

SignCase case_from_name(const std::string& s) {
    if (s == "pp") return SignCase::pp;
    if (s == "pm") return SignCase::pm;
    if (s == "mp") return SignCase::mp;
    if (s == "mm") return SignCase::mm;
    throw Error(ErrCode::invalid_argument, "unknown sign_case: " + s);
}

}  // namespace

cplx alpha_eval(const scattering::ReflectionCoefficient& rc, double xi,
                SignCase sign_case) {
    const cauchy::KappaFunction kap(rc);
    return alpha_eval_impl(rc, kap, xi, sign_case);
}

cplx q_asymptotic(const scattering::ReflectionCoefficient& rc, double x,
                  double t, double t_min) {
    if (std::abs(t) < t_min)
        throw Error(ErrCode::invalid_argument,
                    "|t| below t_min: asymptotic formula not applicable");
    const bool tpos = t > 0.0;
    // x = 0 sits on the removable xi = 0 ray; evaluate on a nearby ray
    // (|alpha|^2 -> |rho(0)|^2/(4 pi) there, and the two x-signs agree).
    const bool xpos = (x != 0.0) ? x > 0.0 : true;
    const double xi = (x != 0.0) ? -x / (4.0 * t) : (tpos ? -kXiEps : kXiEps);
    const SignCase c = tpos ? (xpos ? SignCase::pp : SignCase::pm)
                            : (xpos ? SignCase::mp : SignCase::mm);
    const cauchy::KappaFunction kap(rc);
    const cplx alpha = alpha_eval_impl(rc, kap, xi, c);
    const double kappa = kap(xi);
    const double phase = (tpos ? -1.0 : 1.0) * kappa * std::log(8.0 * std::abs(t)) +
                         x * x / (4.0 * t);
    return alpha / std::sqrt(std::abs(t)) * std::polar(1.0, phase);
}

cplx u_asymptotic(const scattering::ReflectionCoefficient& rc, double x,
                  double t, double t_min) {
    if (x == 0.0)
        throw Error(ErrCode::invalid_argument,
                    "xi must be nonzero for the gauge factor");
    const double xi = -x / (4.0 * t);
    return q_asymptotic(rc, x, t, t_min) *
           gauge_phase_asymptotic(rc, xi, t > 0.0);
}

cplx gauge_phase_asymptotic(const scattering::ReflectionCoefficient& rc,
                            double xi, bool t_positive) {
    if (xi == 0.0) throw Error(ErrCode::invalid_argument, "xi must be nonzero");
    const cauchy::KappaFunction kap(rc);
    const double integral =
        t_positive ? cauchy::kappa_over_s_integral(kap, xi, HUGE_VAL)
                   : cauchy::kappa_over_s_integral(kap, -HUGE_VAL, xi);
    return std::polar(1.0, 2.0 * integral);
}

double plancherel_check(const scattering::Potential& q,
                        const scattering::ReflectionCoefficient& rc) {
    const cauchy::KappaFunction kap(rc);
    const cplx lhs = std::polar(1.0, mass_integral(q));
    const cplx rhs = std::polar(
        1.0, 2.0 * cauchy::kappa_over_s_integral(kap, -HUGE_VAL, HUGE_VAL));
    return std::abs(lhs - rhs);
}

AsymptoticProfile profile(const scattering::ReflectionCoefficient& rc,
                          double xi, SignCase sign_case) {
    const cauchy::KappaFunction kap(rc);
    const cplx alpha = alpha_eval_impl(rc, kap, xi, sign_case);
    AsymptoticProfile p;
    p.xi = xi;
    p.sign_case = sign_case;
    p.kappa = kap(xi);
    p.alpha_mod = std::abs(alpha);
    p.alpha_arg = std::arg(alpha);
    p.gauge_phase = std::arg(
        gauge_phase_asymptotic(rc, xi, model_rhp::t_positive(sign_case)));
    return p;
}

std::string to_json(const AsymptoticProfile& p) {
    nlohmann::json j;
    j["type"] = "asymptotic_profile";
    j["xi"] = p.xi;
    j["sign_case"] = case_name(p.sign_case);
    j["kappa"] = p.kappa;
    j["alpha_mod"] = p.alpha_mod;
    j["alpha_arg"] = p.alpha_arg;
    j["gauge_phase"] = p.gauge_phase;
    return j.dump();
}

AsymptoticProfile profile_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() ||
        j.value("type", "") != std::string("asymptotic_profile"))
        throw Error(ErrCode::invalid_argument,
                    "not an asymptotic_profile JSON object");
    AsymptoticProfile p;
    p.xi = j.at("xi").get<double>();
    p.sign_case = case_from_name(j.at("sign_case").get<std::string>());
    p.kappa = j.at("kappa").get<double>();
    p.alpha_mod = j.at("alpha_mod").get<double>();
    p.alpha_arg = j.at("alpha_arg").get<double>();
    p.gauge_phase = j.at("gauge_phase").get<double>();
    return p;
}

}  // namespace dnls::asymptotics
