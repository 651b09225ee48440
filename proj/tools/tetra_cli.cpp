// Command-line front end: fixpoint, koenigs, solve, sexp, slog, iterate, verify, emit-figure.

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tetra/cauchy_solver.hpp"
#include "tetra/criteria.hpp"
#include "tetra/errors.hpp"
#include "tetra/fixpoint.hpp"
#include "tetra/format.hpp"
#include "tetra/koenigs.hpp"
#include "tetra/special_functions.hpp"
#include "tetra/table_io.hpp"

namespace fs = std::filesystem;
using namespace tetra;

namespace {

constexpr int kExitCriterionFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputConfig {
    std::string format = "json";
    int digits = 17;
};

std::string num(double x, const OutputConfig& out) {
    if (out.format == "json" && !std::isfinite(x)) return "null";
    return format_number(x, out.digits);
}

std::string pair(cplx z, const OutputConfig& out) { return "[" + num(z.real(), out) + "," + num(z.imag(), out) + "]"; }

double parse_double(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw UsageError("cannot parse " + what + " from '" + text + "'");
    return v;
}

double parse_base(const std::string& token) {
    if (token == "e") return std::numbers::e;
    return parse_double(token, "base");
}

// "re" or "re,im".
cplx parse_complex(const std::string& text, const std::string& what) {
    auto comma = text.find(',');
    if (comma == std::string::npos) return {parse_double(text, what), 0.0};
    return {parse_double(text.substr(0, comma), what), parse_double(text.substr(comma + 1), what)};
}

Window parse_window(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_double(item, "window"));
    if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3]))
        throw UsageError("window must be x0,x1,y0,y1 with x0 < x1 and y0 < y1");
    return {v[0], v[1], v[2], v[3]};
}

fs::path table_dir() {
    const char* env = std::getenv("TETRALIB_TABLE_DIR");
    return env && *env ? fs::path(env) : fs::path(".");
}

fs::path default_table(const std::string& base_token) { return table_dir() / ("table_" + base_token + ".json"); }

fs::path resolve_table(const std::string& explicit_path, const std::string& base_token) {
    return explicit_path.empty() ? default_table(base_token) : fs::path(explicit_path);
}

void ensure_writable(const fs::path& path) {
    fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!fs::is_directory(dir) || ::access(dir.c_str(), W_OK) != 0)
        throw Error(ErrorCode::IoError, "cannot write to directory " + dir.string());
    if (fs::exists(path) && ::access(path.c_str(), W_OK) != 0)
        throw Error(ErrorCode::IoError, "cannot overwrite " + path.string());
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

void print_value(const std::string& key, cplx at, cplx value, const OutputConfig& out) {
    if (out.format == "csv") {
        std::cout << "at_re,at_im," << key << "_re," << key << "_im\n"
                  << num(at.real(), out) << "," << num(at.imag(), out) << "," << num(value.real(), out) << ","
                  << num(value.imag(), out) << "\n";
    } else {
        std::cout << "{\"at\":" << pair(at, out) << ",\"" << key << "\":" << pair(value, out) << "}\n";
    }
}

void add_output_options(CLI::App* cmd, OutputConfig& out) {
    cmd->add_option("--format", out.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--digits", out.digits, "significant digits")->check(CLI::Range(6, 17));
}

int cmd_fixpoint(const std::string& base, const OutputConfig& out) {
    FixedPointData fp = principal_fixed_point(Base(parse_base(base)));
    if (out.format == "csv") {
        std::cout << "base,L_re,L_im,c_re,c_im,residual\n"
                  << num(fp.b.value(), out) << "," << num(fp.L.real(), out) << "," << num(fp.L.imag(), out) << ","
                  << num(fp.c.real(), out) << "," << num(fp.c.imag(), out) << "," << num(fp.residual, out) << "\n";
    } else {
        std::cout << "{\"base\":" << num(fp.b.value(), out) << ",\"L\":" << pair(fp.L, out)
                  << ",\"L_conj\":" << pair(fp.L_conj, out) << ",\"c\":" << pair(fp.c, out)
                  << ",\"residual\":" << num(fp.residual, out) << "}\n";
    }
    return 0;
}

int cmd_koenigs(const std::string& base, const std::string& at, bool conjugate, const OutputConfig& out) {
    FixedPointData fp = principal_fixed_point(Base(parse_base(base)));
    KoenigsContext ctx(fp, conjugate);
    const cplx z = parse_complex(at, "--at");
    const cplx x = ctx.chi(z);
    const cplx back = ctx.chi_inverse(x);
    const double schroeder = std::abs(ctx.chi(exp_b(fp.b, z)) - ctx.c() * x);
    if (out.format == "csv") {
        std::cout << "z_re,z_im,chi_re,chi_im,round_trip_error,schroeder_residual\n"
                  << num(z.real(), out) << "," << num(z.imag(), out) << "," << num(x.real(), out) << ","
                  << num(x.imag(), out) << "," << num(std::abs(back - z), out) << "," << num(schroeder, out) << "\n";
    } else {
        std::cout << "{\"z\":" << pair(z, out) << ",\"chi\":" << pair(x, out) << ",\"chi_inverse_chi\":"
                  << pair(back, out) << ",\"round_trip_error\":" << num(std::abs(back - z), out)
                  << ",\"schroeder_residual\":" << num(schroeder, out) << "}\n";
    }
    return 0;
}

int cmd_solve(const std::string& base, SolverParams params, const std::string& out_path, const OutputConfig& out) {
    const Base b(parse_base(base));
    params.validate();
    const fs::path path = out_path.empty() ? default_table(base) : fs::path(out_path);
    ensure_writable(path);
    auto progress = [](int iteration, double update) {
        std::cerr << "sweep " << iteration << " update " << format_number(update, 6) << "\n";
    };
    SolveOutcome result = run_solver(b, params, progress);
    if (!result.converged)
        throw NoConvergenceError("solver did not reach tol within max_iters", result.last_update);
    save_table(result.table, path);
    if (out.format == "csv") {
        std::cout << "iterations,residual,table\n"
                  << result.iterations << "," << num(result.table.final_residual(), out) << "," << path.string()
                  << "\n";
    } else {
        std::cout << "{\"iterations\":" << result.iterations << ",\"residual\":"
                  << num(result.table.final_residual(), out) << ",\"last_update\":" << num(result.last_update, out)
                  << ",\"table\":" << nlohmann::json(path.string()).dump() << "}\n";
    }
    return 0;
}

std::vector<CriterionReport> run_verify(const TetrationTable& table, const std::string& which, int samples,
                                        const Window& window, int k_min, int k_max, double threshold,
                                        const std::string& perturb) {
    AbelFunction alpha = [&table](cplx z) { return slog(table, z); };
    if (perturb == "szekeres") alpha = szekeres_perturbation(alpha);
    const FixedPointData& fp = table.fixed_point();
    const int curve_samples = std::max(16, samples);
    const SampledCurve ell = curve_ell(fp, curve_samples);
    std::vector<CriterionReport> reports;
    if (which == "A" || which == "all")
        reports.push_back(check_covering(alpha, InitialRegionH{fp}, window, k_min, k_max, samples, curve_samples));
    if (which == "B" || which == "all") reports.push_back(check_criterion_B(alpha, ell, threshold));
    if (which == "C" || which == "all") reports.push_back(check_criterion_C(alpha, ell, threshold));
    return reports;
}

int cmd_verify(const fs::path& table_path, const std::string& which, int samples, const std::string& window_text,
               int k_min, int k_max, double threshold, const std::string& perturb, const std::string& out_path) {
    if (samples < 1) throw UsageError("--samples must be positive");
    if (k_min > k_max) throw UsageError("--k-min must not exceed --k-max");
    const Window window = parse_window(window_text);
    if (!out_path.empty()) ensure_writable(out_path);
    const TetrationTable table = load_table(table_path);
    const auto reports = run_verify(table, which, samples, window, k_min, k_max, threshold, perturb);
    std::string text;
    bool passed = true;
    if (reports.size() == 1) {
        text = report_to_json(reports.front());
    } else {
        text = "[";
        for (std::size_t i = 0; i < reports.size(); ++i) text += (i ? "," : "") + report_to_json(reports[i]);
        text += "]";
    }
    for (const auto& r : reports) passed = passed && r.passed;
    text += "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file(out_path, text);
        for (const auto& r : reports)
            std::cout << "criterion " << criterion_name(r.criterion) << ": " << (r.passed ? "pass" : "fail") << " ("
                      << r.witnesses.size() << " witnesses)\n";
    }
    return passed ? 0 : kExitCriterionFail;
}

std::string fig1(const TetrationTable& te, const TetrationTable& t2, const OutputConfig& out) {
    std::string csv = "x,sexp_e,sexp_2\n";
    for (int k = 0; k < 500; ++k) {
        const double x = (k - 199) / 100.0;
        auto real_value = [x](const TetrationTable& t) {
            try {
                cplx v = sexp(t, x);
                return v.imag() == 0.0 ? v.real() : std::nan("");
            } catch (const Error&) {
                return std::nan("");
            }
        };
        csv += num(x, out) + "," + num(real_value(te), out) + "," + num(real_value(t2), out) + "\n";
    }
    return csv;
}

std::string fig3(const TetrationTable& t, const OutputConfig& out) {
    std::string csv = "re,im,abs,arg\n";
    for (int i = 0; i <= 100; ++i) {
        for (int j = 0; j <= 100; ++j) {
            const cplx z{-2.5 + 0.05 * i, -2.5 + 0.05 * j};
            double mod = std::nan(""), arg = std::nan("");
            try {
                cplx v = sexp(t, z);
                mod = std::abs(v);
                arg = std::arg(v);
            } catch (const Error&) {
            }
            csv += num(z.real(), out) + "," + num(z.imag(), out) + "," + num(mod, out) + "," + num(arg, out) + "\n";
        }
    }
    return csv;
}

// slog of the boundary of H: zeta = slog(l(t)) and zeta + 1 = slog(b^l(t)).
std::string fig3_boundary(const TetrationTable& t, const OutputConfig& out) {
    const SampledCurve ell = curve_ell(t.fixed_point(), 401);
    const SampledCurve arc = push_curve(ell, t.base());
    std::string csv = "curve,t,re,im\n";
    auto emit = [&](const char* name, const SampledCurve& c) {
        for (std::size_t k = 0; k < c.z.size(); ++k) {
            cplx v{std::nan(""), std::nan("")};
            try {
                v = slog(t, c.z[k]);
            } catch (const Error&) {
            }
            csv += std::string(name) + "," + num(c.t[k], out) + "," + num(v.real(), out) + "," + num(v.imag(), out) +
                   "\n";
        }
    };
    emit("zeta", ell);
    emit("zeta_plus_1", arc);
    return csv;
}

std::string fig4(const TetrationTable& t, const OutputConfig& out) {
    const std::vector<double> cs{-2, -1, -0.9, -0.5, -0.1, 0, 0.1, 0.5, 0.9, 1, 2};
    std::string csv = "c,x,y\n";
    for (const auto& row : emit_iterate_family(t, cs, -3.0, 3.0, 601))
        csv += num(row.c, out) + "," + num(row.x, out) + "," + num(row.y, out) + "\n";
    return csv;
}

int cmd_emit_figure(const std::string& figure, const std::string& table_e, const std::string& table_2,
                    const std::string& out_path, OutputConfig out) {
    out.format = "csv";
    const fs::path path(out_path);
    ensure_writable(path);
    const TetrationTable te = load_table(resolve_table(table_e, "e"));
    if (figure == "fig1") {
        const TetrationTable t2 = load_table(resolve_table(table_2, "2"));
        write_file(path, fig1(te, t2, out));
    } else if (figure == "fig3") {
        fs::path boundary = path;
        boundary.replace_filename(path.stem().string() + "_boundary" + path.extension().string());
        ensure_writable(boundary);
        write_file(path, fig3(te, out));
        write_file(boundary, fig3_boundary(te, out));
    } else {
        write_file(path, fig4(te, out));
    }
    return 0;
}

void report_error(const std::string& code, const std::string& message,
                  std::optional<double> update = std::nullopt) {
    nlohmann::json j{{"code", code}, {"message", message}};
    if (update) j["final_update_norm"] = *update;
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holomorphic tetration, super-logarithm and fractional iterates of exp_b"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    OutputConfig out;
    std::string base = "e";
    std::string at, c_text, table, table_2, out_path, criterion = "all", window = "-3,3,-3,3", perturb = "none";
    std::string figure;
    bool conjugate = false;
    int samples = 500, k_min = -8, k_max = 8;
    double threshold = kDefaultDivergenceThreshold;
    SolverParams params;

    auto* fixpoint = app.add_subcommand("fixpoint", "principal fixed point L, L*, multiplier c and residual");
    fixpoint->add_option("--base", base, "base b > e^(1/e), or e");
    add_output_options(fixpoint, out);

    auto* koenigs = app.add_subcommand("koenigs", "Koenigs function at a point with round trip and Schroeder residual");
    koenigs->add_option("--base", base, "base b > e^(1/e), or e");
    koenigs->add_option("--at", at, "point re,im")->required();
    koenigs->add_flag("--conjugate", conjugate, "use the fixed point L* instead of L");
    add_output_options(koenigs, out);

    auto* solve_cmd = app.add_subcommand("solve", "solve for sexp_b on the imaginary axis and save the table");
    solve_cmd->add_option("--base", base, "base b > e^(1/e), or e");
    solve_cmd->add_option("--nodes", params.n_nodes, "grid intervals N (even, >= 32)");
    solve_cmd->add_option("--height", params.height, "half-height A (>= 2)");
    solve_cmd->add_option("--tol", params.tol, "sweep update tolerance");
    solve_cmd->add_option("--max-iters", params.max_iters, "sweep budget");
    solve_cmd->add_option("--damping", params.damping, "relaxation factor in (0, 1]");
    solve_cmd->add_option("--out", out_path, "table file (default $TETRALIB_TABLE_DIR/table_<base>.json)");
    add_output_options(solve_cmd, out);

    auto add_table_option = [&](CLI::App* cmd) {
        cmd->add_option("--table", table, "table file (default $TETRALIB_TABLE_DIR/table_<base>.json)");
        cmd->add_option("--base", base, "base used to locate the default table");
    };

    auto* sexp_cmd = app.add_subcommand("sexp", "evaluate sexp_b");
    add_table_option(sexp_cmd);
    sexp_cmd->add_option("--at", at, "point re,im")->required();
    add_output_options(sexp_cmd, out);

    auto* slog_cmd = app.add_subcommand("slog", "evaluate slog_b on its principal region");
    add_table_option(slog_cmd);
    slog_cmd->add_option("--at", at, "point re,im")->required();
    add_output_options(slog_cmd, out);

    auto* iterate_cmd = app.add_subcommand("iterate", "fractional iterate exp_b^c(z) = sexp(c + slog(z))");
    add_table_option(iterate_cmd);
    iterate_cmd->add_option("--c", c_text, "iteration order c (re or re,im)")->required();
    iterate_cmd->add_option("--at", at, "point re,im")->required();
    add_output_options(iterate_cmd, out);

    auto* verify_cmd = app.add_subcommand("verify", "check Criteria A/B/C for slog of a table");
    add_table_option(verify_cmd);
    verify_cmd->add_option("--criterion", criterion, "A, B, C or all")->check(CLI::IsMember({"A", "B", "C", "all"}));
    verify_cmd->add_option("--samples", samples, "curve samples and covering probes");
    verify_cmd->add_option("--window", window, "covering window x0,x1,y0,y1");
    verify_cmd->add_option("--k-min", k_min, "smallest translate");
    verify_cmd->add_option("--k-max", k_max, "largest translate");
    verify_cmd->add_option("--threshold", threshold, "|Im| level of the divergence trend test");
    verify_cmd->add_option("--perturb", perturb, "none or szekeres")->check(CLI::IsMember({"none", "szekeres"}));
    verify_cmd->add_option("--out", out_path, "report file (default: standard output)");

    auto* figure_cmd = app.add_subcommand("emit-figure", "write figure data as CSV");
    figure_cmd->add_option("--table", table, "base-e table (default $TETRALIB_TABLE_DIR/table_e.json)");
    figure_cmd->add_option("--table-2", table_2, "base-2 table for fig1 (default $TETRALIB_TABLE_DIR/table_2.json)");
    figure_cmd->add_option("--figure", figure, "fig1, fig3 or fig4")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig3", "fig4"}));
    figure_cmd->add_option("--out", out_path, "CSV file")->required();
    figure_cmd->add_option("--digits", out.digits, "significant digits")->check(CLI::Range(6, 17));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("Usage", e.what());
        return kExitUsage;
    }

    try {
        if (*fixpoint) return cmd_fixpoint(base, out);
        if (*koenigs) return cmd_koenigs(base, at, conjugate, out);
        if (*solve_cmd) return cmd_solve(base, params, out_path, out);
        if (*sexp_cmd || *slog_cmd || *iterate_cmd) {
            const cplx z = parse_complex(at, "--at");
            const TetrationTable t = load_table(resolve_table(table, base));
            if (*sexp_cmd) print_value("sexp", z, sexp(t, z), out);
            if (*slog_cmd) print_value("slog", z, slog(t, z), out);
            if (*iterate_cmd) print_value("iterate", z, iterate(t, parse_complex(c_text, "--c"), z), out);
            return 0;
        }
        if (*verify_cmd)
            return cmd_verify(resolve_table(table, base), criterion, samples, window, k_min, k_max, threshold, perturb,
                              out_path);
        if (*figure_cmd) return cmd_emit_figure(figure, table, table_2, out_path, out);
    } catch (const NoConvergenceError& e) {
        report_error(std::string(error_code_name(e.code())), e.what(), e.final_update_norm());
        return error_exit_status(e.code());
    } catch (const Error& e) {
        report_error(std::string(error_code_name(e.code())), e.what());
        return error_exit_status(e.code());
    } catch (const UsageError& e) {
        report_error("Usage", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
