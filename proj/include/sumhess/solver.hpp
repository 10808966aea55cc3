#pragma once

// Damped Newton solver for the Dirichlet problem
//
//   S_k(eta(D^2 u)) = f(x, u, Du)  in Omega,   u = g  on the boundary,
//
// discretized with centered differences on a uniform grid.

#include "sumhess/errors.hpp"
#include "sumhess/grid.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <vector>

namespace sumhess {

struct RhsArgs {
    Point x{0.0, 0.0, 0.0};
    double u = 0.0;
    Point p{0.0, 0.0, 0.0};
};

/// f(x, u, Du). The dependency flags let the linearization skip (and exactly
/// zero) the first- and zeroth-order blocks.
struct RhsSpec {
    std::function<double(const RhsArgs&)> f;
    bool depends_on_u = true;
    bool depends_on_p = true;
    bool require_positive = true;
};

using BoundaryFunction = std::function<double(const Point&)>;

struct SumHessianSpec {
    SumHessianParams params;
    RhsSpec rhs;
};

struct SolverConfig {
    double tol = 1e-10;            // sup-norm residual target
    int max_iter = 50;
    double min_step = 1.0 / (1 << 20);
    /// Continuation schedule for f_t = (1 - t) S_k(eta(cI)) + t f; must end at 1.
    std::vector<double> homotopy{1.0};
    /// Bisect the schedule when a stage fails to converge.
    bool refine_homotopy = true;
    int max_homotopy_refinements = 6;
    int threads = 1;
    double fd_step = 1e-6;         // for df/du, df/dp
    double krylov_rtol = 1e-12;
    int krylov_max_iter = 10000;
    double linear_required_reduction = 1e-8;
    std::size_t direct_threshold = 2500;
};

struct TraceEntry {
    int iteration = 0;
    double homotopy_t = 1.0;
    double residual = 0.0;    // sup-norm after the step
    double step = 0.0;        // accepted damping factor (0 for the initial state)
    std::size_t violations = 0;
};

struct SolveResult {
    ScalarField field;
    int iterations = 0;
    double final_residual = 0.0;
    bool admissible = false;
    std::vector<TraceEntry> trace;
    double initial_scale = 0.0;   // c of the initial guess
    /// The interpolated guess was inadmissible; Newton started from c*q and
    /// imposed the Dirichlet data through its boundary rows.
    bool relaxed_start = false;
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::vector<TraceEntry> trace)
        : Error(what), trace_(std::move(trace)) {}
    const std::vector<TraceEntry>& trace() const noexcept { return trace_; }

private:
    std::vector<TraceEntry> trace_;
};

using SparseOperator = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// S_k(eta(lambda(D_h^2 u))) - f(x, u, D_h u) at interior points, 0 elsewhere.
/// Throws InstanceError where f is non-finite or (if required) not positive.
std::vector<double> residual(const ScalarField& field, const SumHessianSpec& spec, int threads = 1);

/// Jacobian of residual() over all grid points; boundary rows are identity.
/// Throws ConeError naming the first interior point outside GammaTilde'_k.
SparseOperator linearize(const ScalarField& field, const SumHessianSpec& spec,
                         double fd_step = 1e-6, int threads = 1);

/// Interior points whose discrete Hessian eigenvalues fall outside GammaTilde'_k.
std::size_t count_inadmissible(const ScalarField& field, const SumHessianParams& params);

/// Smallest power of two c with S_k(eta(cI)) >= sup f over the interior.
double initial_scale(const GridDomain& domain, const SumHessianSpec& spec,
                     const BoundaryFunction& boundary);

/// u0 = c (|x - x_c|^2 - r^2)/2 + w, where w is the discrete harmonic
/// extension of the boundary mismatch g - c(|x - x_c|^2 - r^2)/2.
ScalarField initial_guess(std::shared_ptr<const GridDomain> domain, const SumHessianSpec& spec,
                          const BoundaryFunction& boundary, double* scale_out = nullptr);

/// Damped Newton with admissibility-preserving backtracking.
SolveResult newton_solve(std::shared_ptr<const GridDomain> domain, const SumHessianSpec& spec,
                         const BoundaryFunction& boundary, const SolverConfig& config = {});

/// Same, starting from a caller-provided admissible field.
SolveResult newton_solve_from(ScalarField start, const SumHessianSpec& spec,
                              const SolverConfig& config = {});

} // namespace sumhess
