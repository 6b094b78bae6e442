#include "dnls.h"

#include <cstring>
#include <new>
#include <string>

#include "dnls/asymptotics.hpp"
#include "dnls/harness.hpp"
#include "dnls/model_rhp.hpp"
#include "dnls/scattering.hpp"
#include "dnls/types.hpp"

struct dnls_ctx {
    std::string last_error;
};

struct dnls_potential {
    dnls::scattering::Potential p;
};

struct dnls_reflection {
    dnls::scattering::ReflectionCoefficient rc;
};

namespace {

dnls_status map_code(dnls::ErrCode c) {
    switch (c) {
        case dnls::ErrCode::ok: return DNLS_OK;
        case dnls::ErrCode::invalid_argument: return DNLS_ERR_INVALID_ARGUMENT;
        case dnls::ErrCode::range: return DNLS_ERR_RANGE;
        case dnls::ErrCode::numeric: return DNLS_ERR_NUMERIC;
        case dnls::ErrCode::consistency: return DNLS_ERR_CONSISTENCY;
        case dnls::ErrCode::domain: return DNLS_ERR_DOMAIN;
    }
    return DNLS_ERR_NUMERIC;
}

// Runs f, routing any exception into ctx->last_error. f returns DNLS_OK.
template <typename F>
dnls_status guarded(dnls_ctx* ctx, F&& f) {
    if (!ctx) return DNLS_ERR_INVALID_ARGUMENT;
    ctx->last_error.clear();
    try {
        return f();
    } catch (const dnls::Error& e) {
        ctx->last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        ctx->last_error = "out of memory";
        return DNLS_ERR_NUMERIC;
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return DNLS_ERR_NUMERIC;
    }
}

dnls_status fail(dnls_ctx* ctx, const char* msg) {
    if (ctx) ctx->last_error = msg;
    return DNLS_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

dnls_status make_bell(dnls_ctx* ctx, bool gaussian, double amplitude,
                      double width, double x_half, int n_x,
                      dnls_potential** out) {
    if (!out) return fail(ctx, "out is null");
    return guarded(ctx, [&] {
        dnls::harness::DatumSpec d;
        d.family = gaussian ? "gaussian" : "sech";
        d.amplitude = amplitude;
        d.width = width;
        d.x_half = x_half;
        d.n_x = n_x;
        *out = new dnls_potential{dnls::harness::make_datum(d)};
        return DNLS_OK;
    });
}

}  // namespace

extern "C" {

dnls_ctx* dnls_ctx_new(void) { return new (std::nothrow) dnls_ctx; }

void dnls_ctx_free(dnls_ctx* ctx) { delete ctx; }

const char* dnls_last_error(const dnls_ctx* ctx) {
    return ctx ? ctx->last_error.c_str() : "";
}

void dnls_string_free(char* s) { delete[] s; }
void dnls_potential_free(dnls_potential* q) { delete q; }
void dnls_reflection_free(dnls_reflection* rc) { delete rc; }

dnls_status dnls_potential_gaussian(dnls_ctx* ctx, double amplitude,
                                    double width, double x_half, int n_x,
                                    dnls_potential** out) {
    return make_bell(ctx, true, amplitude, width, x_half, n_x, out);
}

dnls_status dnls_potential_sech(dnls_ctx* ctx, double amplitude, double width,
                                double x_half, int n_x,
                                dnls_potential** out) {
    return make_bell(ctx, false, amplitude, width, x_half, n_x, out);
}

dnls_status dnls_potential_from_json(dnls_ctx* ctx, const char* json,
                                     dnls_potential** out) {
    if (!json || !out) return fail(ctx, "null argument");
    return guarded(ctx, [&] {
        *out = new dnls_potential{dnls::scattering::potential_from_json(json)};
        return DNLS_OK;
    });
}

dnls_status dnls_potential_to_json(dnls_ctx* ctx, const dnls_potential* q,
                                   char** out) {
    if (!q || !out) return fail(ctx, "null argument");
    return guarded(ctx, [&] {
        *out = dup_string(dnls::scattering::to_json(q->p));
        return DNLS_OK;
    });
}

dnls_status dnls_scatter(dnls_ctx* ctx, const dnls_potential* q, double z_max,
                         int n_z, dnls_reflection** out) {
    if (!q || !out) return fail(ctx, "null argument");
    return guarded(ctx, [&] {
        if (!(z_max > 0.0) || n_z < 9)
            throw dnls::Error(dnls::ErrCode::invalid_argument,
                              "need z_max > 0 and n_z >= 9");
        std::vector<double> grid(static_cast<size_t>(n_z));
        for (int i = 0; i < n_z; ++i)
            grid[static_cast<size_t>(i)] =
                -z_max + 2.0 * z_max * i / static_cast<double>(n_z - 1);
        *out = new dnls_reflection{
            dnls::scattering::reflection_map(q->p, grid)};
        return DNLS_OK;
    });
}

dnls_status dnls_reflection_from_json(dnls_ctx* ctx, const char* json,
                                      dnls_reflection** out) {
    if (!json || !out) return fail(ctx, "null argument");
    return guarded(ctx, [&] {
        *out = new dnls_reflection{dnls::scattering::reflection_from_json(json)};
        return DNLS_OK;
    });
}

dnls_status dnls_reflection_to_json(dnls_ctx* ctx, const dnls_reflection* rc,
                                    char** out) {
    if (!rc || !out) return fail(ctx, "null argument");
    return guarded(ctx, [&] {
        *out = dup_string(dnls::scattering::to_json(rc->rc));
        return DNLS_OK;
    });
}

dnls_status dnls_profile_json(dnls_ctx* ctx, const dnls_reflection* rc,
                              double xi, const char* sign_case, char** out) {
    if (!rc || !sign_case || !out) return fail(ctx, "null argument");
    return guarded(ctx, [&] {
        const std::string sc = sign_case;
        dnls::model_rhp::SignCase c;
        if (sc == "pp") c = dnls::model_rhp::SignCase::pp;
        else if (sc == "pm") c = dnls::model_rhp::SignCase::pm;
        else if (sc == "mp") c = dnls::model_rhp::SignCase::mp;
        else if (sc == "mm") c = dnls::model_rhp::SignCase::mm;
        else
            throw dnls::Error(dnls::ErrCode::invalid_argument,
                              "sign_case must be pp, pm, mp, or mm");
        *out = dup_string(dnls::asymptotics::to_json(
            dnls::asymptotics::profile(rc->rc, xi, c)));
        return DNLS_OK;
    });
}

dnls_status dnls_q_asymptotic(dnls_ctx* ctx, const dnls_reflection* rc,
                              double x, double t, double* out_re,
                              double* out_im) {
    if (!rc || !out_re || !out_im) return fail(ctx, "null argument");
    return guarded(ctx, [&] {
        const dnls::cplx q = dnls::asymptotics::q_asymptotic(rc->rc, x, t);
        *out_re = q.real();
        *out_im = q.imag();
        return DNLS_OK;
    });
}

dnls_status dnls_u_asymptotic(dnls_ctx* ctx, const dnls_reflection* rc,
                              double x, double t, double* out_re,
                              double* out_im) {
    if (!rc || !out_re || !out_im) return fail(ctx, "null argument");
    return guarded(ctx, [&] {
        const dnls::cplx u = dnls::asymptotics::u_asymptotic(rc->rc, x, t);
        *out_re = u.real();
        *out_im = u.imag();
        return DNLS_OK;
    });
}

dnls_status dnls_run_pipeline(dnls_ctx* ctx, const char* config_json,
                              char** out_report, int* out_passed) {
    if (!config_json || !out_report || !out_passed)
        return fail(ctx, "null argument");
    return guarded(ctx, [&] {
        const auto cfg = dnls::harness::config_from_json(config_json);
        const auto result = dnls::harness::run_pipeline(cfg);
        *out_report = dup_string(result.report_json);
        *out_passed = result.passed ? 1 : 0;
        return DNLS_OK;
    });
}

dnls_status dnls_evolve_report(dnls_ctx* ctx, const char* config_json,
                               char** out_report) {
    if (!config_json || !out_report) return fail(ctx, "null argument");
    return guarded(ctx, [&] {
        const auto cfg = dnls::harness::config_from_json(config_json);
        *out_report = dup_string(dnls::harness::evolve_report(cfg));
        return DNLS_OK;
    });
}

dnls_status dnls_specfun_selftest(dnls_ctx* ctx, unsigned seed,
                                  char** out_report, int* out_passed) {
    if (!out_report || !out_passed) return fail(ctx, "null argument");
    return guarded(ctx, [&] {
        bool ok = false;
        *out_report = dup_string(dnls::harness::specfun_selftest(seed, &ok));
        *out_passed = ok ? 1 : 0;
        return DNLS_OK;
    });
}

}  // extern "C"
