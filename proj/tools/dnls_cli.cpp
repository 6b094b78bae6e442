// dnls: command-line front end. Talks to the library exclusively through
// the C API in dnls.h; config documents are massaged as JSON text here.
//
// Exit codes: 0 success, 2 tolerance/verification failure, 1 any error.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dnls.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTolerance = 2;

struct CtxDeleter {
    void operator()(dnls_ctx* c) const { dnls_ctx_free(c); }
};
using CtxPtr = std::unique_ptr<dnls_ctx, CtxDeleter>;

std::string take_string(char* s) {
    std::string out = s ? s : "";
    dnls_string_free(s);
    return out;
}

int fail(const dnls_ctx* ctx, const char* where) {
    std::cerr << "error: " << where << ": " << dnls_last_error(ctx) << "\n";
    return kExitError;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw CLI::ValidationError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    f << text;
}

// Loads the config (or "{}" when no --config was given), applies --out and
// any --tol-override k=v pairs, and returns the JSON text the C API expects.
std::string assemble_config(const std::string& config_path,
                            const std::string& out_dir,
                            const std::vector<std::string>& overrides) {
    json j = json::object();
    if (!config_path.empty()) {
        j = json::parse(read_file(config_path), nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw CLI::ValidationError(config_path + " is not a JSON object");
    }
    if (!out_dir.empty()) j["out_dir"] = out_dir;
    for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw CLI::ValidationError("--tol-override expects key=value, got " +
                                       kv);
        const std::string key = kv.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--tol-override " + key +
                                       ": value is not a number");
        }
        j["tolerances"][key] = value;
    }
    return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Long-time asymptotics for the derivative NLS equation: direct "
        "scattering, leading-order profiles, pseudo-spectral evolution, and "
        "the verification pipeline tying them together."};
    app.require_subcommand(1);

    std::string config_path, out_dir, rc_path, sign_case = "pp";
    std::vector<std::string> tol_overrides;
    double arg_x = 0.0, arg_t = 0.0, arg_xi = 0.0;
    unsigned seed = 0;

    auto add_common = [&](CLI::App* cmd, bool with_tol) {
        cmd->add_option("--config", config_path, "experiment config JSON");
        cmd->add_option("--out", out_dir, "directory for artifacts");
        if (with_tol)
            cmd->add_option("--tol-override", tol_overrides,
                            "tolerance override key=value (repeatable)");
    };

    CLI::App* scatter =
        app.add_subcommand("scatter", "datum -> reflection coefficient JSON");
    add_common(scatter, false);

    CLI::App* asym = app.add_subcommand(
        "asymptote",
        "reflection data -> leading-order profile or point value");
    asym->add_option("--rc", rc_path, "reflection coefficient JSON file")
        ->required();
    auto* opt_x = asym->add_option("--x", arg_x, "position");
    auto* opt_t = asym->add_option("--t", arg_t, "time (|t| >= 5)");
    auto* opt_xi = asym->add_option("--xi", arg_xi, "ray xi = -x/(4t)");
    asym->add_option("--sign-case", sign_case,
                     "pp|pm|mp|mm, the (sign t, sign x) pair for --xi");
    opt_x->needs(opt_t);
    opt_t->needs(opt_x);
    opt_xi->excludes(opt_x);

    CLI::App* evolve =
        app.add_subcommand("evolve", "datum -> PDE snapshots and ray samples");
    add_common(evolve, false);

    CLI::App* verify =
        app.add_subcommand("verify", "full pipeline -> verification report");
    add_common(verify, true);

    CLI::App* selftest = app.add_subcommand(
        "specfun-selftest", "special-function identity suites");
    selftest->add_option("--seed", seed, "RNG seed for sampled identities");

    CLI11_PARSE(app, argc, argv);

    CtxPtr ctx(dnls_ctx_new());
    if (!ctx) {
        std::cerr << "error: cannot allocate context\n";
        return kExitError;
    }

    try {
        if (scatter->parsed()) {
            if (config_path.empty())
                throw CLI::ValidationError("scatter requires --config");
            const std::string cfg =
                assemble_config(config_path, "", tol_overrides);
            const json j = json::parse(cfg);
            dnls_potential* q = nullptr;
            const json d = j.value("datum", json::object());
            const std::string family = d.value("family", "gaussian");
            dnls_status st;
            if (family == "custom") {
                st = dnls_potential_from_json(
                    ctx.get(), read_file(d.value("file", "")).c_str(), &q);
            } else {
                const double amp = d.value("amplitude", 0.3);
                const double width = d.value("width", 1.0);
                const double x_half = d.value("x_half", 8.0);
                const int n_x = d.value("n_x", 2801);
                st = family == "sech"
                         ? dnls_potential_sech(ctx.get(), amp, width, x_half,
                                               n_x, &q)
                         : dnls_potential_gaussian(ctx.get(), amp, width,
                                                   x_half, n_x, &q);
            }
            if (st != DNLS_OK) return fail(ctx.get(), "datum");
            const json sc = j.value("scattering", json::object());
            dnls_reflection* rc = nullptr;
            st = dnls_scatter(ctx.get(), q, sc.value("z_max", 8.0),
                              sc.value("n_z", 257), &rc);
            dnls_potential_free(q);
            if (st != DNLS_OK) return fail(ctx.get(), "scatter");
            char* text = nullptr;
            dnls_reflection_to_json(ctx.get(), rc, &text);
            dnls_reflection_free(rc);
            const std::string doc = take_string(text);
            if (!out_dir.empty())
                write_file(std::filesystem::path(out_dir) / "rc.json", doc);
            std::cout << doc << "\n";
            return kExitOk;
        }

        if (asym->parsed()) {
            dnls_reflection* rc = nullptr;
            if (dnls_reflection_from_json(ctx.get(),
                                          read_file(rc_path).c_str(),
                                          &rc) != DNLS_OK)
                return fail(ctx.get(), "reflection data");
            int code = kExitOk;
            if (opt_x->count() > 0) {
                double qr, qi, ur, ui;
                if (dnls_q_asymptotic(ctx.get(), rc, arg_x, arg_t, &qr, &qi) !=
                        DNLS_OK ||
                    dnls_u_asymptotic(ctx.get(), rc, arg_x, arg_t, &ur, &ui) !=
                        DNLS_OK) {
                    code = fail(ctx.get(), "asymptote");
                } else {
                    json out{{"x", arg_x},
                             {"t", arg_t},
                             {"q_as", json::array({qr, qi})},
                             {"u_as", json::array({ur, ui})}};
                    std::cout << out.dump(2) << "\n";
                }
            } else if (opt_xi->count() > 0) {
                char* text = nullptr;
                if (dnls_profile_json(ctx.get(), rc, arg_xi, sign_case.c_str(),
                                      &text) != DNLS_OK)
                    code = fail(ctx.get(), "profile");
                else
                    std::cout << take_string(text) << "\n";
            } else {
                std::cerr << "error: asymptote needs --x/--t or --xi\n";
                code = kExitError;
            }
            dnls_reflection_free(rc);
            return code;
        }

        if (evolve->parsed() || verify->parsed()) {
            if (config_path.empty())
                throw CLI::ValidationError("this subcommand requires --config");
            const std::string cfg =
                assemble_config(config_path, out_dir, tol_overrides);
            char* text = nullptr;
            if (evolve->parsed()) {
                if (dnls_evolve_report(ctx.get(), cfg.c_str(), &text) !=
                    DNLS_OK)
                    return fail(ctx.get(), "evolve");
                const std::string doc = take_string(text);
                if (!out_dir.empty())
                    write_file(std::filesystem::path(out_dir) / "evolve.json",
                               doc);
                std::cout << doc << "\n";
                return kExitOk;
            }
            int passed = 0;
            if (dnls_run_pipeline(ctx.get(), cfg.c_str(), &text, &passed) !=
                DNLS_OK)
                return fail(ctx.get(), "verify");
            std::cout << take_string(text) << "\n";
            return passed ? kExitOk : kExitTolerance;
        }

        // specfun-selftest
        char* text = nullptr;
        int passed = 0;
        if (dnls_specfun_selftest(ctx.get(), seed, &text, &passed) != DNLS_OK)
            return fail(ctx.get(), "specfun-selftest");
        std::cout << take_string(text) << "\n";
        return passed ? kExitOk : kExitTolerance;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
