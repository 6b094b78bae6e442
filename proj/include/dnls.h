/* dnls: C interface to the DNLS inverse-scattering asymptotics library.
 *
 * Usage pattern:
 *   dnls_ctx* ctx = dnls_ctx_new();
 *   dnls_potential* q = NULL;
 *   if (dnls_potential_gaussian(ctx, 0.3, 1.0, 8.0, 2801, &q) != DNLS_OK)
 *       fprintf(stderr, "%s\n", dnls_last_error(ctx));
 *   ...
 *   dnls_potential_free(q);
 *   dnls_ctx_free(ctx);
 *
 * Every fallible call takes the context first and returns a dnls_status.
 * On failure the out-parameters are untouched and dnls_last_error(ctx)
 * holds a message until the next call through the same context. Contexts
 * are cheap; use one per thread (a context is not internally locked, but
 * distinct contexts may be used concurrently).
 *
 * Strings returned through char** out-parameters are heap-allocated and
 * must be released with dnls_string_free. Handles are opaque and freed
 * with their matching *_free function; freeing NULL is a no-op.
 */
#ifndef DNLS_H
#define DNLS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dnls_status {
    DNLS_OK = 0,
    DNLS_ERR_INVALID_ARGUMENT = 1,
    DNLS_ERR_RANGE = 2,
    DNLS_ERR_NUMERIC = 3,
    DNLS_ERR_CONSISTENCY = 4,
    DNLS_ERR_DOMAIN = 5
} dnls_status;

typedef struct dnls_ctx dnls_ctx;
typedef struct dnls_potential dnls_potential;
typedef struct dnls_reflection dnls_reflection;

/* ------------------------------------------------------------- lifecycle */
dnls_ctx* dnls_ctx_new(void);
void dnls_ctx_free(dnls_ctx* ctx);

/* Message for the most recent failed call through ctx ("" if none). The
 * pointer stays valid until the next call through the same context. */
const char* dnls_last_error(const dnls_ctx* ctx);

void dnls_string_free(char* s);
void dnls_potential_free(dnls_potential* q);
void dnls_reflection_free(dnls_reflection* rc);

/* ---------------------------------------------------------- initial data */
/* amplitude * exp(-(x/width)^2) sampled at n_x uniform nodes on
 * [-x_half, x_half]. */
dnls_status dnls_potential_gaussian(dnls_ctx* ctx, double amplitude,
                                    double width, double x_half, int n_x,
                                    dnls_potential** out);
/* amplitude / cosh(x/width), same grid conventions. */
dnls_status dnls_potential_sech(dnls_ctx* ctx, double amplitude, double width,
                                double x_half, int n_x,
                                dnls_potential** out);
dnls_status dnls_potential_from_json(dnls_ctx* ctx, const char* json,
                                     dnls_potential** out);
dnls_status dnls_potential_to_json(dnls_ctx* ctx, const dnls_potential* q,
                                   char** out);

/* ------------------------------------------------------------ scattering */
/* Direct scattering map on n_z uniform nodes covering [-z_max, z_max]. */
dnls_status dnls_scatter(dnls_ctx* ctx, const dnls_potential* q, double z_max,
                         int n_z, dnls_reflection** out);
dnls_status dnls_reflection_from_json(dnls_ctx* ctx, const char* json,
                                      dnls_reflection** out);
dnls_status dnls_reflection_to_json(dnls_ctx* ctx, const dnls_reflection* rc,
                                    char** out);

/* ------------------------------------------------------------ asymptotics */
/* Leading-order profile on the ray xi = -x/(4t); JSON with kappa,
 * alpha_mod, alpha_arg, gauge_phase. sign_case is one of
 * "pp", "pm", "mp", "mm" encoding (sign t, sign x). */
dnls_status dnls_profile_json(dnls_ctx* ctx, const dnls_reflection* rc,
                              double xi, const char* sign_case, char** out);
/* Leading-order solution of the gauged equation at (x, t), |t| >= 5. */
dnls_status dnls_q_asymptotic(dnls_ctx* ctx, const dnls_reflection* rc,
                              double x, double t, double* out_re,
                              double* out_im);
/* Same for the ungauged equation (multiplied by the gauge phase limit). */
dnls_status dnls_u_asymptotic(dnls_ctx* ctx, const dnls_reflection* rc,
                              double x, double t, double* out_re,
                              double* out_im);

/* --------------------------------------------------------------- pipeline */
/* Full verification pipeline driven by a config JSON document (see the
 * harness documentation for the schema). *out_report receives the report
 * JSON; *out_passed is 1 if every gate passed, else 0. A failed stage is
 * recorded in the report and returns DNLS_OK; only malformed configs or
 * I/O failures return an error. */
dnls_status dnls_run_pipeline(dnls_ctx* ctx, const char* config_json,
                              char** out_report, int* out_passed);
/* PDE evolution + ray sampling only (no asymptotic comparison). */
dnls_status dnls_evolve_report(dnls_ctx* ctx, const char* config_json,
                               char** out_report);
/* Special-function self-test (Wronskian + recurrence residuals). */
dnls_status dnls_specfun_selftest(dnls_ctx* ctx, unsigned seed,
                                  char** out_report, int* out_passed);

#ifdef __cplusplus
}
#endif

#endif /* DNLS_H */
