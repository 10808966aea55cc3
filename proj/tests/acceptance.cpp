// Acceptance suite. One PASS/FAIL line per criterion; exit status is nonzero
// when any criterion fails. Tolerances are fixed here, not read from configs.

#include "sumhess/cli.hpp"
#include "sumhess/config.hpp"
#include "sumhess/errors.hpp"
#include "sumhess/estimates.hpp"
#include "sumhess/solver.hpp"
#include "sumhess/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace sumhess;

namespace {

constexpr double kIdentitySeconds = 30.0;
constexpr double kExactSupError = 1e-9;
constexpr int kLinearIterations = 2;
constexpr double kRatioLow = 3.2, kRatioHigh = 4.8;
constexpr double kConvergenceSeconds = 300.0;
constexpr double kPogorelovDriftFactor = 3.0;
constexpr double kWeightedDrift = 0.10;
constexpr double kScaleFactor = 5.0;   // times h^2
constexpr int kSuiteCount = 1000;
constexpr std::uint64_t kSuiteSeed = 7;

const fs::path kInstances = SUMHESS_INSTANCES;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

// ---- solves shared by several criteria --------------------------------------

struct Solved {
    RunConfig config;
    SolveResult result;
    double seconds = 0.0;
};

std::map<std::string, Solved> g_solved;

const Solved& solved(const std::string& file) {
    auto it = g_solved.find(file);
    if (it != g_solved.end()) return it->second;
    Solved s;
    s.config = load_config(kInstances / file);
    const auto t0 = Clock::now();
    s.result = newton_solve(make_domain(s.config), make_spec(s.config), boundary_from_expression(s.config.boundary),
                            s.config.solver);
    s.seconds = seconds_since(t0);
    return g_solved.emplace(file, std::move(s)).first->second;
}

double sup_error(const ScalarField& field, const BoundaryFunction& exact) {
    double worst = 0.0;
    for (std::size_t i = 0; i < field.grid->size(); ++i) {
        worst = std::max(worst, std::abs(field.values[i] - exact(field.grid->coordinates(i))));
    }
    return worst;
}

// ---- suites ------------------------------------------------------------------

using SuiteFn = std::vector<CheckResult> (*)(const SumHessianParams&, const SuiteOptions&);

struct SweepSummary {
    std::size_t checks = 0, failed = 0, constants = 0, nonpositive_constants = 0;
    std::map<std::string, std::size_t> failing;   // check name -> configurations failing
    std::string first;
};

SweepSummary sweep(SuiteFn suite, int n_min, int n_max) {
    SuiteOptions options;
    options.count = kSuiteCount;
    options.seed = kSuiteSeed;
    SweepSummary s;
    for (int n = n_min; n <= n_max; ++n) {
        for (int k = 1; k <= n; ++k) {
            for (double alpha : {0.0, 0.5, 2.0}) {
                const SumHessianParams p(n, k, alpha);
                for (const CheckResult& c : suite(p, options)) {
                    if (c.skipped) continue;
                    ++s.checks;
                    if (c.constant) {
                        ++s.constants;
                        if (!(*c.constant > 0.0)) ++s.nonpositive_constants;
                    }
                    if (!c.passed()) {
                        ++s.failed;
                        ++s.failing[c.name];
                        if (s.first.empty()) s.first = format_check(c, p);
                    }
                }
            }
        }
    }
    return s;
}

std::string describe(const SweepSummary& s) {
    std::string d = std::to_string(s.checks - s.failed) + "/" + std::to_string(s.checks) + " checks";
    for (const auto& [name, count] : s.failing) d += "; " + name + " fails in " + std::to_string(count) + " configs";
    if (!s.first.empty()) d += "; first: " + s.first;
    return d;
}

Outcome identities() {
    const auto t0 = Clock::now();
    const SweepSummary s = sweep(identity_suite, 2, 8);
    const double t = seconds_since(t0);
    return {s.failed == 0 && t < kIdentitySeconds, describe(s) + ", " + num(t) + " s (limit " + num(kIdentitySeconds) + ")"};
}

Outcome inequalities() {
    const SweepSummary s = sweep(inequality_suite, 2, 8);
    return {s.failed == 0 && s.nonpositive_constants == 0,
            describe(s) + ", " + std::to_string(s.constants - s.nonpositive_constants) + "/" +
                std::to_string(s.constants) + " constants positive"};
}

Outcome derivatives() {
    const SweepSummary s = sweep(derivative_suite, 2, 8);
    return {s.failed == 0, describe(s)};
}

// ---- solver ------------------------------------------------------------------

Outcome exact_quadratic() {
    Outcome o;
    const Solved& q = solved("quadratic3d.cfg");
    const BoundaryFunction qexact = boundary_from_expression(q.config.boundary);
    const double err = sup_error(q.result.field, qexact);
    ScalarField qstart(q.result.field.grid);
    for (std::size_t i = 0; i < qstart.grid->size(); ++i) {
        const Point x = qstart.grid->coordinates(i);
        qstart.values[i] = qexact(x);
        if (qstart.grid->is_interior(i)) {
            qstart.values[i] += 0.05 * std::cos(1.5 * x[0]) * std::cos(1.5 * x[1]) * std::cos(1.5 * x[2]) * (1 - x[0] * x[0]);
        }
    }
    const SolveResult qp = newton_solve_from(qstart, make_spec(q.config), q.config.solver);
    const double qperr = sup_error(qp.field, qexact);
    o.pass = err <= kExactSupError && qperr <= kExactSupError && q.result.field.grid->points(0) == 33;
    o.detail = "k=2 grid " + std::to_string(q.result.field.grid->points(0)) + "^3 sup error " + num(err) +
               ", perturbed start " + std::to_string(qp.iterations) + " iterations (error " + num(qperr) + ")";

    // linear case from its default start and from a perturbed exact start
    const Solved& l = solved("quadratic3d-k1.cfg");
    const BoundaryFunction exact = boundary_from_expression(l.config.boundary);
    const double lerr = sup_error(l.result.field, exact);
    ScalarField start(l.result.field.grid);
    for (std::size_t i = 0; i < start.grid->size(); ++i) {
        const Point x = start.grid->coordinates(i);
        start.values[i] = exact(x);
        if (start.grid->is_interior(i)) {
            start.values[i] += 0.03 * std::sin(3.0 * x[1]) * (1 - x[0] * x[0]) * (1 - x[1] * x[1]) * (1 - x[2] * x[2]);
        }
    }
    const SolveResult p = newton_solve_from(start, make_spec(l.config), l.config.solver);
    const double perr = sup_error(p.field, exact);
    o.pass = o.pass && l.result.iterations <= kLinearIterations && p.iterations <= kLinearIterations &&
             lerr <= kExactSupError && perr <= kExactSupError;
    o.detail += "; k=1 " + std::to_string(l.result.iterations) + " iterations (error " + num(lerr) +
                "), perturbed start " + std::to_string(p.iterations) + " iterations (error " + num(perr) + ")";
    return o;
}

Outcome manufactured_convergence() {
    Outcome o;
    double total = 0.0;
    const std::vector<std::vector<std::string>> families{
        {"exp-radial2d-32.cfg", "exp-radial2d-64.cfg", "exp-radial2d-128.cfg"},
        {"exp-radial3d-16.cfg", "exp-radial3d-32.cfg"}};
    for (const auto& family : families) {
        double prev = 0.0;
        for (const std::string& file : family) {
            const Solved& s = solved(file);
            total += s.seconds;
            const double err = sup_error(s.result.field, boundary_from_expression(s.config.boundary));
            if (!o.detail.empty()) o.detail += prev > 0.0 ? " " : "; ";
            o.detail += std::to_string(s.result.field.grid->points(0)) + ":" + num(err);
            if (prev > 0.0) {
                const double ratio = prev / err;
                o.detail += " (ratio " + num(ratio) + ")";
                if (!(ratio >= kRatioLow && ratio <= kRatioHigh)) o.pass = false;
            }
            prev = err;
        }
    }
    if (total >= kConvergenceSeconds) o.pass = false;
    o.detail += "; solve time " + num(total) + " s";
    return o;
}

Outcome admissibility() {
    Outcome o;
    std::size_t instances = 0, entries = 0, violations = 0;
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(kInstances)) {
        if (e.path().extension() == ".cfg") files.push_back(e.path().filename().string());
    }
    std::sort(files.begin(), files.end());
    for (const std::string& file : files) {
        const Solved& s = solved(file);
        ++instances;
        for (const TraceEntry& t : s.result.trace) {
            ++entries;
            violations += t.violations;
        }
        if (!s.result.admissible) {
            o.pass = false;
            o.detail += file + " not admissible; ";
        }
    }
    o.pass = o.pass && violations == 0 && instances > 0;
    o.detail += std::to_string(instances) + " instances, " + std::to_string(entries) + " trace entries, " +
                std::to_string(violations) + " violations";
    return o;
}

// ---- estimates ---------------------------------------------------------------

EstimateReport report_for(const std::string& file) {
    const Solved& s = solved(file);
    return estimate_report(s.config.id, s.result.field, s.config.betas, s.config.p_params);
}

Outcome estimate_boundedness() {
    Outcome o;
    for (const char* f : {"18", "72", "288"}) {
        const std::string stem = std::string("ball3d-k2-f") + f;
        const EstimateReport coarse = report_for(stem + "-16.cfg");
        const EstimateReport fine = report_for(stem + "-32.cfg");
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += "f=" + std::string(f) + " ";
        if (!coarse.pogorelov_product || !fine.pogorelov_product || !std::isfinite(*coarse.pogorelov_product) ||
            !std::isfinite(*fine.pogorelov_product)) {
            o.pass = false;
            o.detail += "not finite";
            continue;
        }
        const double a = *coarse.pogorelov_product, b = *fine.pogorelov_product;
        const double factor = std::max(a / b, b / a);
        o.detail += num(a) + " -> " + num(b) + " (factor " + num(factor) + ")";
        if (!(a > 0.0 && b > 0.0 && factor <= kPogorelovDriftFactor)) o.pass = false;
    }
    return o;
}

Outcome weighted_estimate() {
    std::vector<EstimateReport> reports{report_for("ball3d-k3-16.cfg"), report_for("ball3d-k3-32.cfg")};
    mark_stable_betas(reports, kWeightedDrift);
    const EstimateReport& coarse = reports[0];
    const EstimateReport& fine = reports[1];
    std::string d;
    for (std::size_t i = 0; i < fine.betas.size(); ++i) {
        d += "beta " + num(fine.betas[i]) + ": ";
        const auto& a = coarse.weighted_pogorelov[i];
        const auto& b = fine.weighted_pogorelov[i];
        d += a && b ? "drift " + num(drift(*a, *b)) : std::string("NA");
        d += "; ";
    }
    if (fine.stable_beta) return {true, d + "report names beta " + num(*fine.stable_beta)};
    return {false, d + "no stable beta"};
}

Outcome scale_invariance() {
    Outcome o;
    for (const char* cells : {"16", "32"}) {
        const EstimateReport unit = report_for(std::string("ball3d-k2-f18-") + cells + ".cfg");
        const EstimateReport big = report_for(std::string("ball3d-k2-f18-r2-") + cells + ".cfg");
        const double diff = std::abs(unit.interior_ratio - big.interior_ratio);
        const double limit = kScaleFactor * unit.h * unit.h;
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += std::string(cells) + " cells: " + num(unit.interior_ratio) + " vs " + num(big.interior_ratio) +
                    " (|diff| " + num(diff) + ", limit " + num(limit) + ")";
        if (!(diff <= limit)) o.pass = false;
    }
    return o;
}

// ---- determinism -------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "sumhess_acceptance";
    fs::remove_all(root);
    const std::string quad = (kInstances / "quadratic3d.cfg").string();
    const std::string ball16 = (kInstances / "ball3d-k3-16.cfg").string();
    const std::string ball32 = (kInstances / "ball3d-k3-32.cfg").string();

    // each command writes its CSVs into the run directory given as {}
    const std::vector<std::pair<std::string, std::function<std::vector<std::string>(const fs::path&)>>> commands{
        {"verify", [](const fs::path& d) {
             return std::vector<std::string>{"verify", "--n", "4", "--count", "200", "--csv", (d / "verify.csv").string()};
         }},
        {"sample", [](const fs::path& d) {
             return std::vector<std::string>{"sample", "--cone", "GAMMA_TILDE_PRIME_K", "--n", "5", "--k", "3",
                                             "--alpha", "0.5", "--count", "500", "-o", (d / "sample.csv").string()};
         }},
        {"solve", [&](const fs::path& d) {
             return std::vector<std::string>{"solve", quad, "--field-out", (d / "quad.field").string(), "--trace-out",
                                             (d / "quad.trace.csv").string()};
         }},
        {"estimate", [&](const fs::path& d) {
             return std::vector<std::string>{"estimate", ball16, "-o", (d / "estimate.csv").string()};
         }},
        {"report", [&](const fs::path& d) {
             return std::vector<std::string>{"report", ball16, ball32, "-o", (d / "report.csv").string()};
         }},
    };

    Outcome o;
    std::size_t files = 0;
    for (const auto& [name, make] : commands) {
        std::vector<int> codes;
        for (const char* run : {"a", "b"}) {
            const fs::path dir = root / run;
            fs::create_directories(dir);
            std::ostringstream out, err;
            codes.push_back(run_cli(make(dir), out, err));
        }
        if (codes[0] != codes[1]) {
            o.pass = false;
            o.detail += name + " exit codes differ; ";
        }
    }
    for (const auto& e : fs::directory_iterator(root / "a")) {
        ++files;
        const fs::path other = root / "b" / e.path().filename();
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
            o.pass = false;
            o.detail += e.path().filename().string() + " differs; ";
        }
    }
    o.pass = o.pass && files == 6;
    o.detail += std::to_string(files) + " output files compared byte for byte";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"identity_suite", identities},
        {"inequality_suite", inequalities},
        {"derivative_oracles", derivatives},
        {"exact_quadratic_solve", exact_quadratic},
        {"manufactured_convergence", manufactured_convergence},
        {"admissibility_safeguard", admissibility},
        {"estimate_boundedness", estimate_boundedness},
        {"weighted_estimate_k_equals_n", weighted_estimate},
        {"scale_invariance", scale_invariance},
        {"cli_determinism", determinism},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << index << "] " << name << ": " << o.detail << " ["
                  << num(seconds_since(t0)) << " s]" << std::endl;
    }
    std::cout << (criteria.size() - failed) << " of " << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
