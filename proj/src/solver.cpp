#include "sumhess/solver.hpp"

#include "sumhess/cones.hpp"
#include "sumhess/format.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

namespace sumhess {

namespace {

using ColMajorSparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;

// Runs fn(begin, end) over [0, count) in contiguous chunks. Each chunk writes
// only its own slots, so results do not depend on the thread count. The
// exception of the lowest failing chunk is rethrown.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count / 256 + 1);
    if (workers <= 1) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                try {
                    fn(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string describe_point(const GridDomain& grid, std::size_t idx) {
    const Point x = grid.coordinates(idx);
    std::string s = "grid point " + std::to_string(idx) + " (x = ";
    for (int a = 0; a < grid.dim(); ++a) s += (a ? ", " : "") + format_double(x[a]);
    return s + ")";
}

double evaluate_rhs(const RhsSpec& rhs, const GridDomain& grid, std::size_t idx, const RhsArgs& args) {
    const double f = rhs.f(args);
    if (!std::isfinite(f)) {
        throw InstanceError("right-hand side is not finite at " + describe_point(grid, idx));
    }
    if (rhs.require_positive && !(f > 0.0)) {
        throw InstanceError("right-hand side f = " + format_double(f) + " is not positive at " +
                            describe_point(grid, idx));
    }
    return f;
}

RhsArgs rhs_args(const GridDomain& grid, std::span<const double> u, std::size_t idx) {
    return {grid.coordinates(idx), u[idx], discrete_gradient(grid, u, idx)};
}

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Residual and admissibility from one eigen decomposition per point.
struct FieldState {
    std::vector<double> residual;
    std::size_t violations = 0;
    std::optional<std::size_t> first_violation;
};

FieldState evaluate_field(const ScalarField& field, const SumHessianSpec& spec, int threads) {
    const GridDomain& grid = *field.grid;
    const auto& interior = grid.interior_points();
    FieldState state;
    state.residual.assign(grid.size(), 0.0);
    std::vector<char> bad(interior.size(), 0);
    parallel_for(interior.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t idx = interior[i];
            const PointOperator op =
                evaluate_point(discrete_hessian(grid, field.values, idx), spec.params, false);
            const double f = evaluate_rhs(spec.rhs, grid, idx, rhs_args(grid, field.values, idx));
            state.residual[idx] = op.value - f;
            bad[i] = op.admissible ? 0 : 1;
        }
    });
    for (std::size_t i = 0; i < interior.size(); ++i) {
        if (!bad[i]) continue;
        ++state.violations;
        if (!state.first_violation) state.first_violation = interior[i];
    }
    return state;
}

// Nonzeros of one linearized row: at most 1 + 2*3 + 4*3 stencil points.
struct RowEntries {
    std::array<std::size_t, 19> col{};
    std::array<double, 19> val{};
    int count = 0;
    void add(std::size_t c, double v) {
        for (int i = 0; i < count; ++i) {
            if (col[i] == c) {
                val[i] += v;
                return;
            }
        }
        col[count] = c;
        val[count] = v;
        ++count;
    }
};

struct FdPartials {
    double du = 0.0;
    Point dp{0.0, 0.0, 0.0};
};

FdPartials rhs_partials(const RhsSpec& rhs, const GridDomain& grid, std::size_t idx,
                        const RhsArgs& args, double step) {
    FdPartials out;
    auto central = [&](RhsArgs plus, RhsArgs minus, double h) {
        return (evaluate_rhs(rhs, grid, idx, plus) - evaluate_rhs(rhs, grid, idx, minus)) / (2.0 * h);
    };
    if (rhs.depends_on_u) {
        const double h = step * std::max(1.0, std::abs(args.u));
        RhsArgs plus = args, minus = args;
        plus.u += h;
        minus.u -= h;
        out.du = central(plus, minus, h);
    }
    if (rhs.depends_on_p) {
        for (int a = 0; a < grid.dim(); ++a) {
            const double h = step * std::max(1.0, std::abs(args.p[a]));
            RhsArgs plus = args, minus = args;
            plus.p[a] += h;
            minus.p[a] -= h;
            out.dp[a] = central(plus, minus, h);
        }
    }
    return out;
}

// Linearized rows for every interior point (indexed like interior_points()).
std::vector<RowEntries> assemble_rows(const ScalarField& field, const SumHessianSpec& spec,
                                      double fd_step, int threads) {
    const GridDomain& grid = *field.grid;
    const auto& interior = grid.interior_points();
    const int d = grid.dim();
    std::vector<RowEntries> rows(interior.size());
    std::vector<char> bad(interior.size(), 0);

    parallel_for(interior.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t idx = interior[i];
            const PointOperator op =
                evaluate_point(discrete_hessian(grid, field.values, idx), spec.params, true);
            if (!op.admissible) {
                bad[i] = 1;
                continue;
            }
            const FdPartials fp =
                rhs_partials(spec.rhs, grid, idx, rhs_args(grid, field.values, idx), fd_step);
            const auto ijk = grid.unravel(idx);
            auto neighbour = [&](int a, int sa, int b, int sb) {
                auto p = ijk;
                p[a] += sa;
                p[b] += sb;
                return grid.index(p);
            };
            RowEntries& row = rows[i];
            double centre = -fp.du;
            for (int a = 0; a < d; ++a) {
                const double ha = grid.spacing(a);
                const double gaa = op.gradient(a, a) / (ha * ha);
                const double adv = fp.dp[a] / (2.0 * ha);
                centre -= 2.0 * gaa;
                row.add(neighbour(a, 1, a, 0), gaa - adv);
                row.add(neighbour(a, -1, a, 0), gaa + adv);
            }
            row.add(idx, centre);
            for (int a = 0; a < d; ++a) {
                for (int b = a + 1; b < d; ++b) {
                    // G_ab and G_ba both multiply the cross stencil.
                    const double w = 2.0 * op.gradient(a, b) / (4.0 * grid.spacing(a) * grid.spacing(b));
                    row.add(neighbour(a, 1, b, 1), w);
                    row.add(neighbour(a, 1, b, -1), -w);
                    row.add(neighbour(a, -1, b, 1), -w);
                    row.add(neighbour(a, -1, b, -1), w);
                }
            }
        }
    });

    for (std::size_t i = 0; i < interior.size(); ++i) {
        if (bad[i]) {
            throw ConeError("linearize: discrete Hessian leaves the admissible cone at " +
                                describe_point(grid, interior[i]),
                            interior[i]);
        }
    }
    return rows;
}

// Maps grid indices to unknown numbers (interior points only).
std::vector<std::ptrdiff_t> unknown_numbers(const GridDomain& grid) {
    std::vector<std::ptrdiff_t> map(grid.size(), -1);
    const auto& interior = grid.interior_points();
    for (std::size_t i = 0; i < interior.size(); ++i) map[interior[i]] = static_cast<std::ptrdiff_t>(i);
    return map;
}

Eigen::VectorXd solve_linear(const ColMajorSparse& a, const Eigen::VectorXd& b, const SolverConfig& config) {
    const double bnorm = b.norm();
    if (bnorm == 0.0) return Eigen::VectorXd::Zero(b.size());
    auto accepted = [&](const Eigen::VectorXd& x) {
        return x.allFinite() && (a * x - b).norm() <= config.linear_required_reduction * bnorm;
    };

    if (static_cast<std::size_t>(a.rows()) >= config.direct_threshold) {
        Eigen::BiCGSTAB<ColMajorSparse, Eigen::DiagonalPreconditioner<double>> krylov;
        krylov.setTolerance(config.krylov_rtol);
        krylov.setMaxIterations(config.krylov_max_iter);
        krylov.compute(a);
        if (krylov.info() == Eigen::Success) {
            Eigen::VectorXd x = krylov.solve(b);
            if (accepted(x)) return x;
        }
    }
    Eigen::SparseLU<ColMajorSparse, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) throw LinearSolverError("sparse LU factorization failed: " + lu.lastErrorMessage());
    Eigen::VectorXd x = lu.solve(b);
    if (!accepted(x)) {
        throw LinearSolverError("linear solve did not reduce the residual by the required factor");
    }
    return x;
}

// Discrete harmonic extension of boundary values (interior entries of `values` are ignored).
std::vector<double> harmonic_extension(const GridDomain& grid, std::vector<double> values,
                                       const SolverConfig& config) {
    const auto& interior = grid.interior_points();
    const auto map = unknown_numbers(grid);
    const int d = grid.dim();
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(interior.size()));
    for (std::size_t i = 0; i < interior.size(); ++i) {
        const auto ijk = grid.unravel(interior[i]);
        double centre = 0.0;
        for (int a = 0; a < d; ++a) {
            const double w = 1.0 / (grid.spacing(a) * grid.spacing(a));
            centre -= 2.0 * w;
            for (int s : {-1, 1}) {
                auto p = ijk;
                p[a] += s;
                const std::size_t nb = grid.index(p);
                if (map[nb] >= 0) {
                    trip.emplace_back(static_cast<int>(i), static_cast<int>(map[nb]), w);
                } else {
                    rhs[static_cast<Eigen::Index>(i)] -= w * values[nb];
                }
            }
        }
        trip.emplace_back(static_cast<int>(i), static_cast<int>(i), centre);
    }
    ColMajorSparse lap(static_cast<Eigen::Index>(interior.size()), static_cast<Eigen::Index>(interior.size()));
    lap.setFromTriplets(trip.begin(), trip.end());
    const Eigen::VectorXd w = solve_linear(lap, rhs, config);
    for (std::size_t i = 0; i < interior.size(); ++i) values[interior[i]] = w[static_cast<Eigen::Index>(i)];
    return values;
}

double quadratic_bowl(const GridDomain& grid, std::size_t idx) {
    const Point x = grid.coordinates(idx);
    const Point c = grid.center();
    const double r = grid.inscribed_radius();
    double s = 0.0;
    for (int a = 0; a < grid.dim(); ++a) s += (x[a] - c[a]) * (x[a] - c[a]);
    return 0.5 * (s - r * r);
}

double level_of_scale(const SumHessianParams& params, double c) {
    const Vector e = Vector::Constant(params.n, (params.n - 1) * c);
    return sum_hessian(EigenTuple(e), params);
}

// Pieces of the initial guess: u_c = c * bowl_part + boundary_part.
struct GuessParts {
    std::vector<double> bowl_part;      // q - W(q|boundary)
    std::vector<double> boundary_part;  // W(g|boundary)
};

GuessParts guess_parts(const GridDomain& grid, const BoundaryFunction& boundary, const SolverConfig& config) {
    std::vector<double> q(grid.size()), g(grid.size(), 0.0);
    bool mismatch = false;
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        q[idx] = quadratic_bowl(grid, idx);
        if (!grid.is_interior(idx)) {
            g[idx] = boundary(grid.coordinates(idx));
            if (!std::isfinite(g[idx])) {
                throw InstanceError("boundary data is not finite at " + describe_point(grid, idx));
            }
        }
    }
    GuessParts parts;
    std::vector<double> wq = harmonic_extension(grid, q, config);
    parts.bowl_part.resize(grid.size());
    for (std::size_t idx = 0; idx < grid.size(); ++idx) parts.bowl_part[idx] = q[idx] - wq[idx];
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        if (!grid.is_interior(idx) && g[idx] != 0.0) mismatch = true;
    }
    parts.boundary_part = mismatch ? harmonic_extension(grid, g, config) : g;
    return parts;
}

// Exact quadratic plus harmonic correction; the correction vanishes
// identically when g matches c*q on the boundary.
std::vector<double> assemble_guess(const GridDomain& grid, const BoundaryFunction& boundary, double c,
                                   const SolverConfig& config) {
    std::vector<double> u(grid.size());
    std::vector<double> mismatch(grid.size(), 0.0);
    bool any = false;
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        u[idx] = c * quadratic_bowl(grid, idx);
        if (!grid.is_interior(idx)) {
            const double g = boundary(grid.coordinates(idx));
            mismatch[idx] = g - u[idx];
            if (mismatch[idx] != 0.0) any = true;
        }
    }
    if (any) {
        const std::vector<double> w = harmonic_extension(grid, mismatch, config);
        for (std::size_t idx = 0; idx < grid.size(); ++idx) u[idx] += w[idx];
    }
    // Dirichlet entries are the data itself, not c*q + (g - c*q).
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        if (!grid.is_interior(idx)) u[idx] = boundary(grid.coordinates(idx));
    }
    return u;
}

double sup_rhs(const GridDomain& grid, const RhsSpec& rhs, std::span<const double> u) {
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t idx : grid.interior_points()) {
        sup = std::max(sup, evaluate_rhs(rhs, grid, idx, rhs_args(grid, u, idx)));
    }
    return sup;
}

constexpr int kMinScaleExponent = -10;
constexpr int kMaxScaleExponent = 60;

double choose_scale(const GridDomain& grid, const SumHessianSpec& spec, const BoundaryFunction& boundary,
                    const SolverConfig& config) {
    const GuessParts parts = guess_parts(grid, boundary, config);
    std::vector<double> u(grid.size());
    auto guess_for = [&](double c) {
        for (std::size_t idx = 0; idx < grid.size(); ++idx)
            u[idx] = grid.is_interior(idx) ? c * parts.bowl_part[idx] + parts.boundary_part[idx]
                                           : boundary(grid.coordinates(idx));
    };
    const bool field_dependent = spec.rhs.depends_on_u || spec.rhs.depends_on_p;
    double fixed_sup = 0.0;
    if (!field_dependent) {
        guess_for(1.0);
        fixed_sup = sup_rhs(grid, spec.rhs, u);
    }
    for (int j = kMinScaleExponent; j <= kMaxScaleExponent; ++j) {
        const double c = std::ldexp(1.0, j);
        double sup = fixed_sup;
        if (field_dependent) {
            guess_for(c);
            sup = sup_rhs(grid, spec.rhs, u);
        }
        if (level_of_scale(spec.params, c) >= sup) return c;
    }
    throw InstanceError("initial_guess: no power of two c <= 2^60 reaches sup f");
}

ColMajorSparse reduced_jacobian(const GridDomain& grid, const std::vector<RowEntries>& rows) {
    const auto map = unknown_numbers(grid);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(rows.size() * 19);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int e = 0; e < rows[i].count; ++e) {
            const std::ptrdiff_t c = map[rows[i].col[e]];
            if (c >= 0) trip.emplace_back(static_cast<int>(i), static_cast<int>(c), rows[i].val[e]);
        }
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    ColMajorSparse j(n, n);
    j.setFromTriplets(trip.begin(), trip.end());
    return j;
}

SumHessianSpec homotopy_spec(const SumHessianSpec& spec, double t, double level) {
    if (t == 1.0) return spec;
    SumHessianSpec out = spec;
    out.rhs.f = [f = spec.rhs.f, t, level](const RhsArgs& a) { return (1.0 - t) * level + t * f(a); };
    return out;
}

// Largest |u - g| over non-interior points; nonzero only while a relaxed
// start is still pulling the Dirichlet data in.
double boundary_gap(const ScalarField& field, const std::vector<double>* dirichlet) {
    if (!dirichlet) return 0.0;
    double gap = 0.0;
    for (std::size_t idx = 0; idx < field.values.size(); ++idx)
        if (!field.grid->is_interior(idx)) gap = std::max(gap, std::abs(field.values[idx] - (*dirichlet)[idx]));
    return gap;
}

// Newton iterations for one continuation stage; appends to trace and
// returns the number of iterations taken. With `dirichlet` set, boundary
// values are unknowns with identity rows u_b - g_b, so a damped step moves
// them only part of the way; a full step lands on g_b exactly.
int newton_stage(ScalarField& field, const SumHessianSpec& spec, const SolverConfig& config, double t,
                 const std::vector<double>* dirichlet, std::vector<TraceEntry>& trace) {
    const GridDomain& grid = *field.grid;
    const auto& interior = grid.interior_points();
    const auto map = unknown_numbers(grid);
    FieldState state = evaluate_field(field, spec, config.threads);
    double gap = boundary_gap(field, dirichlet);
    double rnorm = std::max(sup_norm(state.residual), gap);
    trace.push_back({0, t, rnorm, 0.0, state.violations});
    if (state.violations > 0) {
        throw ConeError("newton_solve: starting field is not admissible at " +
                            describe_point(grid, *state.first_violation),
                        *state.first_violation);
    }

    int iter = 0;
    while (rnorm > config.tol || gap > 0.0) {
        if (iter >= config.max_iter) {
            throw NonConvergenceError("newton_solve: residual " + format_double(rnorm) + " after " +
                                          std::to_string(iter) + " iterations",
                                      trace);
        }
        ++iter;
        const std::vector<RowEntries> rows = assemble_rows(field, spec, config.fd_step, config.threads);
        const ColMajorSparse jac = reduced_jacobian(grid, rows);
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(interior.size()));
        for (std::size_t i = 0; i < interior.size(); ++i) {
            double r = -state.residual[interior[i]];
            if (gap > 0.0) {
                for (int e = 0; e < rows[i].count; ++e) {
                    const std::size_t c = rows[i].col[e];
                    if (map[c] < 0) r -= rows[i].val[e] * ((*dirichlet)[c] - field.values[c]);
                }
            }
            rhs[static_cast<Eigen::Index>(i)] = r;
        }
        const Eigen::VectorXd delta = solve_linear(jac, rhs, config);

        double step = 1.0;
        ScalarField candidate = field;
        for (;;) {
            for (std::size_t i = 0; i < interior.size(); ++i)
                candidate.values[interior[i]] = field.values[interior[i]] + step * delta[static_cast<Eigen::Index>(i)];
            if (gap > 0.0) {
                for (std::size_t idx = 0; idx < grid.size(); ++idx) {
                    if (map[idx] >= 0) continue;
                    const double g = (*dirichlet)[idx];
                    candidate.values[idx] = step == 1.0 ? g : field.values[idx] + step * (g - field.values[idx]);
                }
            }
            std::optional<FieldState> trial;
            try {
                trial = evaluate_field(candidate, spec, config.threads);
            } catch (const InstanceError&) {
                trial.reset();
            }
            if (trial && trial->violations == 0) {
                const double tgap = boundary_gap(candidate, dirichlet);
                const double tnorm = std::max(sup_norm(trial->residual), tgap);
                if (tnorm < rnorm) {
                    field = std::move(candidate);
                    state = std::move(*trial);
                    rnorm = tnorm;
                    gap = tgap;
                    break;
                }
            }
            step *= 0.5;
            if (step < config.min_step) {
                throw NonConvergenceError("newton_solve: line search stalled at residual " +
                                              format_double(rnorm),
                                          trace);
            }
        }
        trace.push_back({iter, t, rnorm, step, state.violations});
    }
    return iter;
}

} // namespace

std::vector<double> residual(const ScalarField& field, const SumHessianSpec& spec, int threads) {
    return evaluate_field(field, spec, threads).residual;
}

SparseOperator linearize(const ScalarField& field, const SumHessianSpec& spec, double fd_step, int threads) {
    const GridDomain& grid = *field.grid;
    const std::vector<RowEntries> rows = assemble_rows(field, spec, fd_step, threads);
    const auto& interior = grid.interior_points();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(rows.size() * 19 + grid.size());
    for (std::size_t i = 0; i < interior.size(); ++i)
        for (int e = 0; e < rows[i].count; ++e)
            trip.emplace_back(static_cast<int>(interior[i]), static_cast<int>(rows[i].col[e]), rows[i].val[e]);
    for (std::size_t idx = 0; idx < grid.size(); ++idx)
        if (!grid.is_interior(idx)) trip.emplace_back(static_cast<int>(idx), static_cast<int>(idx), 1.0);
    const auto n = static_cast<Eigen::Index>(grid.size());
    SparseOperator op(n, n);
    op.setFromTriplets(trip.begin(), trip.end());
    return op;
}

std::size_t count_inadmissible(const ScalarField& field, const SumHessianParams& params) {
    std::size_t bad = 0;
    for (std::size_t idx : field.grid->interior_points()) {
        if (!evaluate_point(discrete_hessian(field, idx), params, false).admissible) ++bad;
    }
    return bad;
}

double initial_scale(const GridDomain& domain, const SumHessianSpec& spec, const BoundaryFunction& boundary) {
    return choose_scale(domain, spec, boundary, SolverConfig{});
}

ScalarField initial_guess(std::shared_ptr<const GridDomain> domain, const SumHessianSpec& spec,
                          const BoundaryFunction& boundary, double* scale_out) {
    const SolverConfig config;
    const double c = choose_scale(*domain, spec, boundary, config);
    if (scale_out) *scale_out = c;
    ScalarField field(domain);
    field.values = assemble_guess(*domain, boundary, c, config);
    return field;
}

SolveResult newton_solve(std::shared_ptr<const GridDomain> domain, const SumHessianSpec& spec,
                         const BoundaryFunction& boundary, const SolverConfig& config) {
    if (spec.params.n != domain->dim()) throw ArgumentError("newton_solve: n must equal the grid dimension");
    if (config.homotopy.empty() || config.homotopy.back() != 1.0) {
        throw ArgumentError("newton_solve: homotopy schedule must end at t = 1");
    }
    SolveResult result;
    const double c = choose_scale(*domain, spec, boundary, config);
    result.initial_scale = c;
    result.field = ScalarField(domain);
    result.field.values = assemble_guess(*domain, boundary, c, config);
    double level = level_of_scale(spec.params, c);

    // The interpolated guess can leave the cone next to box corners or a
    // staircase boundary. Fall back to the bare bowl one power of two up,
    // whose discrete Hessian is exactly 2cI and whose residual is strictly
    // positive, and let Newton pull the boundary values in.
    std::vector<double> dirichlet;
    if (count_inadmissible(result.field, spec.params) > 0) {
        dirichlet = result.field.values;
        for (std::size_t idx = 0; idx < domain->size(); ++idx)
            result.field.values[idx] = 2.0 * c * quadratic_bowl(*domain, idx);
        level = level_of_scale(spec.params, 2.0 * c);
        result.relaxed_start = true;
    }

    std::vector<double> schedule = config.homotopy;
    int refinements = 0;
    double last_t = 0.0;
    for (std::size_t s = 0; s < schedule.size();) {
        const double t = schedule[s];
        ScalarField attempt = result.field;
        try {
            result.iterations += newton_stage(attempt, homotopy_spec(spec, t, level), config, t,
                                              dirichlet.empty() ? nullptr : &dirichlet, result.trace);
        } catch (const NonConvergenceError& e) {
            if (!config.refine_homotopy || refinements >= config.max_homotopy_refinements) {
                throw NonConvergenceError(e.what(), result.trace);
            }
            ++refinements;
            schedule.insert(schedule.begin() + static_cast<std::ptrdiff_t>(s), 0.5 * (last_t + t));
            continue;
        }
        result.field = std::move(attempt);
        last_t = t;
        ++s;
    }
    const FieldState final_state = evaluate_field(result.field, spec, config.threads);
    result.final_residual = sup_norm(final_state.residual);
    result.admissible = final_state.violations == 0;
    return result;
}

SolveResult newton_solve_from(ScalarField start, const SumHessianSpec& spec, const SolverConfig& config) {
    SolveResult result;
    result.field = std::move(start);
    result.iterations = newton_stage(result.field, spec, config, 1.0, nullptr, result.trace);
    const FieldState final_state = evaluate_field(result.field, spec, config.threads);
    result.final_residual = sup_norm(final_state.residual);
    result.admissible = final_state.violations == 0;
    return result;
}

} // namespace sumhess
