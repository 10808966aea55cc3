#include "sumhess/cli.hpp"

#include "sumhess/cones.hpp"
#include "sumhess/config.hpp"
#include "sumhess/errors.hpp"
#include "sumhess/estimates.hpp"
#include "sumhess/format.hpp"
#include "sumhess/suites.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace sumhess {

namespace {

// Usage and configuration problems map to exit status 2.
struct UsageError : Error {
    using Error::Error;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open " + path + " for writing");
    return f;
}

// Writes through `fill` either to `path` or, when it is empty, to `out`.
template <class Fill>
void emit(const std::string& path, std::ostream& out, Fill fill) {
    if (path.empty()) {
        fill(out);
        return;
    }
    std::ofstream f = open_output(path);
    fill(f);
    if (!f) throw UsageError("write to " + path + " failed");
}

void write_trace(std::ostream& out, const std::vector<TraceEntry>& trace) {
    out << "iteration,homotopy_t,residual,step,violations\n";
    for (const TraceEntry& e : trace) {
        out << e.iteration << ',' << format_double(e.homotopy_t) << ',' << format_double(e.residual) << ','
            << format_double(e.step) << ',' << e.violations << '\n';
    }
}

std::string csv_quote(const std::string& s) { return s.empty() ? "NA" : "\"" + s + "\""; }

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
    std::optional<int> n, k;
    std::optional<double> alpha;
    int count = 1000;
    std::uint64_t seed = 7;
    std::string suite = "all";
    std::string csv;
};

int run_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    if (a.count < 1) throw UsageError("--count must be positive");
    std::vector<int> ns;
    if (a.n) {
        if (*a.n < 2 || *a.n > 8) throw UsageError("--n must lie in 2..8");
        ns = {*a.n};
    } else {
        ns = {2, 3, 4, 5, 6, 7, 8};
    }
    const std::vector<double> alphas = a.alpha ? std::vector<double>{*a.alpha} : std::vector<double>{0.0, 0.5, 2.0};

    SuiteOptions options;
    options.count = a.count;
    options.seed = a.seed;

    std::vector<std::pair<SumHessianParams, CheckResult>> all;
    for (double alpha : alphas) {
        for (int n : ns) {
            std::vector<int> ks;
            if (a.k) {
                ks = {*a.k};
            } else {
                for (int k = 1; k <= n; ++k) ks.push_back(k);
            }
            for (int k : ks) {
                const SumHessianParams p(n, k, alpha);
                auto add = [&](std::vector<CheckResult> r) {
                    for (auto& c : r) all.emplace_back(p, std::move(c));
                };
                if (a.suite == "all" || a.suite == "identities") add(identity_suite(p, options));
                if (a.suite == "all" || a.suite == "inequalities") add(inequality_suite(p, options));
                if (a.suite == "all" || a.suite == "derivatives") add(derivative_suite(p, options));
            }
        }
    }

    std::size_t failed = 0;
    for (const auto& [p, c] : all) {
        out << format_check(c, p) << '\n';
        if (!c.passed()) ++failed;
    }
    if (!a.csv.empty()) {
        emit(a.csv, out, [&](std::ostream& o) {
            o << "suite,check,n,k,alpha,status,cases,failures,worst,constant,first_failure\n";
            for (const auto& [p, c] : all) {
                o << c.suite << ',' << c.name << ',' << p.n << ',' << p.k << ',' << format_double(p.alpha) << ','
                  << (c.skipped ? "skip" : c.passed() ? "pass" : "fail") << ',' << c.cases << ',' << c.failures
                  << ',' << (c.skipped ? "NA" : format_double(c.worst)) << ','
                  << (c.constant ? format_double(*c.constant) : "NA") << ',' << csv_quote(c.first_failure) << '\n';
            }
        });
    }
    err << "verify: " << all.size() - failed << " of " << all.size() << " checks passed\n";
    return failed == 0 ? 0 : 1;
}

// ---- sample ----------------------------------------------------------------

struct SampleArgs {
    std::string cone = "GAMMA_TILDE_K";
    int n = 3, k = 2;
    double alpha = 0.0;
    int count = 100;
    std::uint64_t seed = 7;
    std::string out;
};

int run_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
    std::string name = a.cone;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::toupper(ch); });
    const ConeSampleBatch batch = sample_cone(cone_from_string(name), SumHessianParams(a.n, a.k, a.alpha), a.count, a.seed);
    emit(a.out, out, [&](std::ostream& o) { write_csv(o, batch); });
    err << "sample: " << batch.samples.size() << " points from " << name << '\n';
    return 0;
}

// ---- solve / estimate / report ---------------------------------------------

SolveResult solve_config(const RunConfig& config, std::ostream& err) {
    const SolveResult r = newton_solve(make_domain(config), make_spec(config),
                                       boundary_from_expression(config.boundary), config.solver);
    err << "solve " << config.id << ": " << r.iterations << " Newton iterations, residual "
        << format_double(r.final_residual) << ", c = " << format_double(r.initial_scale)
        << (r.relaxed_start ? ", relaxed start" : "") << '\n';
    return r;
}

std::string or_default(const std::string& flag, const std::string& from_config, const std::string& fallback) {
    if (!flag.empty()) return flag;
    if (!from_config.empty()) return from_config;
    return fallback;
}

struct SolveArgs {
    std::string config;
    std::string field_out, trace_out;
};

int run_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    const RunConfig config = load_config(a.config);
    const std::string field_path = or_default(a.field_out, config.field_out, config.id + ".field");
    const std::string trace_path = or_default(a.trace_out, config.trace_out, config.id + ".trace.csv");
    try {
        const SolveResult r = solve_config(config, err);
        emit(trace_path, out, [&](std::ostream& o) { write_trace(o, r.trace); });
        emit(field_path, out, [&](std::ostream& o) { write_field(o, r.field); });
    } catch (const NonConvergenceError& e) {
        emit(trace_path, out, [&](std::ostream& o) { write_trace(o, e.trace()); });
        throw;
    }
    return 0;
}

bool looks_like_config(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".cfg") == 0;
}

struct EstimateArgs {
    std::string input;
    std::string config;   // mask and parameters for a bare field file
    std::vector<double> betas;
    std::string out;
};

int run_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
    std::optional<RunConfig> config;
    if (looks_like_config(a.input)) config = load_config(a.input);
    else if (!a.config.empty()) config = load_config(a.config);

    ScalarField field;
    std::string id;
    if (looks_like_config(a.input)) {
        field = solve_config(*config, err).field;
        id = config->id;
    } else {
        std::ifstream in(a.input);
        if (!in) throw UsageError("cannot open field file " + a.input);
        std::optional<BallMask> mask;
        if (config && config->domain.ball_mask) mask = BallMask{config->domain.mask_center, config->domain.mask_radius};
        field = read_field(in, mask);
        id = config ? config->id : std::filesystem::path(a.input).stem().string();
    }
    const std::vector<double> betas = !a.betas.empty() ? a.betas : config ? config->betas : std::vector<double>{1, 2, 4, 8};
    for (double b : betas)
        if (!(b >= 1.0)) throw UsageError("--beta values must be >= 1");
    const PParams p = config ? config->p_params : PParams{};
    const std::vector<EstimateReport> reports{estimate_report(id, field, betas, p)};
    const std::string path = or_default(a.out, config ? config->report_out : "", "");
    emit(path, out, [&](std::ostream& o) { write_family_report(o, reports); });
    return 0;
}

struct ReportArgs {
    std::vector<std::string> configs;
    std::vector<double> betas;
    double tolerance = 0.10;
    std::string out;
};

int run_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<RunConfig> configs;
    for (const auto& path : a.configs) configs.push_back(load_config(path));
    const std::vector<double> betas = !a.betas.empty() ? a.betas : configs.front().betas;
    for (double b : betas)
        if (!(b >= 1.0)) throw UsageError("--beta values must be >= 1");
    std::vector<EstimateReport> reports;
    for (const RunConfig& c : configs) {
        reports.push_back(estimate_report(c.id, solve_config(c, err).field, betas, c.p_params));
    }
    mark_stable_betas(reports, a.tolerance);
    emit(a.out, out, [&](std::ostream& o) { write_family_report(o, reports); });
    for (const EstimateReport& r : reports) {
        if (r.stable_beta) err << "report " << r.instance_id << ": beta " << format_double(*r.stable_beta)
                               << " stable at h = " << format_double(r.h) << '\n';
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sum Hessian equation laboratory", "sumhess"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run the symmetric-function, cone and derivative property suites");
    verify->add_option("--n", va.n, "Dimension (default: sweep 2..8)")->check(CLI::Range(2, 8));
    verify->add_option("--k", va.k, "Order (default: sweep 1..n)");
    verify->add_option("--alpha", va.alpha, "Coefficient (default: sweep 0, 0.5, 2)")->check(CLI::NonNegativeNumber);
    verify->add_option("--count", va.count, "Cases per check")->capture_default_str();
    verify->add_option("--seed", va.seed, "Random seed")->capture_default_str();
    verify->add_option("--suite", va.suite, "identities, inequalities, derivatives or all")
        ->check(CLI::IsMember({"all", "identities", "inequalities", "derivatives"}))
        ->capture_default_str();
    verify->add_option("--csv", va.csv, "Also write the check table as CSV");

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "Draw cone samples and write them as CSV");
    sample->add_option("--cone", sa.cone, "GAMMA_K, GAMMA_TILDE_K, GAMMA_PRIME_K or GAMMA_TILDE_PRIME_K")
        ->capture_default_str();
    sample->add_option("--n", sa.n)->check(CLI::Range(2, 8))->capture_default_str();
    sample->add_option("--k", sa.k)->capture_default_str();
    sample->add_option("--alpha", sa.alpha)->check(CLI::NonNegativeNumber)->capture_default_str();
    sample->add_option("--count", sa.count)->check(CLI::PositiveNumber)->capture_default_str();
    sample->add_option("--seed", sa.seed)->capture_default_str();
    sample->add_option("-o,--out", sa.out, "Output CSV (default: stdout)");

    SolveArgs so;
    auto* solve = app.add_subcommand("solve", "Solve the Dirichlet problem described by a config file");
    solve->add_option("config", so.config, "Run config")->required();
    solve->add_option("--field-out", so.field_out, "Field file (default: from config, else <id>.field)");
    solve->add_option("--trace-out", so.trace_out, "Newton trace CSV (default: from config, else <id>.trace.csv)");

    EstimateArgs ea;
    auto* estimate = app.add_subcommand("estimate", "Estimate report for a field file or a config");
    estimate->add_option("input", ea.input, "Field file, or a .cfg to solve first")->required();
    estimate->add_option("--config", ea.config, "Config supplying id, mask and P parameters for a field file");
    estimate->add_option("--beta", ea.betas, "Weighted-product exponents")->delimiter(',');
    estimate->add_option("-o,--out", ea.out, "Output CSV (default: from config, else stdout)");

    ReportArgs ra;
    auto* report = app.add_subcommand("report", "Family table over several configs");
    report->add_option("configs", ra.configs, "Run configs")->required();
    report->add_option("--beta", ra.betas, "Weighted-product exponents")->delimiter(',');
    report->add_option("--tolerance", ra.tolerance, "Relative drift accepted as stable")->capture_default_str();
    report->add_option("-o,--out", ra.out, "Output CSV (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    try {
        if (*verify) return run_verify(va, out, err);
        if (*sample) return run_sample(sa, out, err);
        if (*solve) return run_solve(so, out, err);
        if (*estimate) return run_estimate(ea, out, err);
        if (*report) return run_report(ra, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        err << "expression error: " << e.what() << '\n';
        return 2;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "failed: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "failed: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace sumhess
