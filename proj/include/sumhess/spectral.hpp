#pragma once

// Matrix-space calculus of the sum Hessian operator
//
//   F(H) = S_k(eta(lambda(H))),   lambda(H) the eigenvalues of H,
//
// equivalently S_k of the eigenvalues of U[H] = tr(H) I - H.

#include "sumhess/symfun.hpp"

namespace sumhess {

inline constexpr int kMaxMatrixDim = 8;

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxMatrixDim, kMaxMatrixDim>;

/// Dense symmetric matrix of dimension 2..8.
class SymMatrix {
public:
    SymMatrix() = default;
    /// Throws ArgumentError if the dimension is out of range or some
    /// |m(i,j) - m(j,i)| exceeds 1e-14.
    explicit SymMatrix(const SmallMatrix& m);

    /// Averages m with its transpose; for products such as Q^T H Q that are
    /// symmetric only up to rounding.
    static SymMatrix symmetrized(const SmallMatrix& m);
    static SymMatrix identity(int dim);
    static SymMatrix diagonal(std::span<const double> d);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    const SmallMatrix& matrix() const noexcept { return m_; }
    double trace() const { return m_.trace(); }

private:
    SmallMatrix m_;
};

struct EigenDecomposition {
    EigenTuple values;   // descending
    SmallMatrix frame;   // column i is the eigenvector of values[i]
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is at most
/// 1e-13 ||M||_F. Throws NumericalError after 50 sweeps.
EigenDecomposition eigen_sym(const SymMatrix& m);

/// U[H] = tr(H) I - H.
SymMatrix u_operator(const SymMatrix& h);

enum class OperatorMode {
    Raw,        // S_k(eta)
    Normalized  // S_k(eta)^{1/k}; DomainError when S_k(eta) <= 0
};

double operator_value(const SymMatrix& h, const SumHessianParams& params,
                      OperatorMode mode = OperatorMode::Raw);

/// dF/dH as a symmetric matrix G, so that the directional derivative along a
/// symmetric A is sum_ij G_ij A_ij. In H's eigenframe G is diagonal with the
/// T-coefficients below.
SymMatrix operator_gradient(const SymMatrix& h, const SumHessianParams& params);

/// t_i = dS_k(eta)/dlambda_i = sum_j g_j - g_i with g = dS_k/deta, ordered
/// like the descending eigenvalues of H.
Vector t_coefficients(const SymMatrix& h, const SumHessianParams& params);

/// d^2/ds^2 F(H + sA) at s = 0, via the eigenframe formula with the
/// divided-difference term (f_p - f_q)/(lambda_p - lambda_q). Pairs closer
/// than 1e-8 max(1, ||H||) use the symmetric-function limit f_pp - f_pq.
double operator_second_derivative(const SymMatrix& h, const SymMatrix& a,
                                  const SumHessianParams& params);

/// Everything the grid solver needs at one point, from a single decomposition.
struct PointOperator {
    EigenTuple lambda;      // descending eigenvalues of H
    EigenTuple eta;         // eta(lambda), ascending
    double value = 0.0;     // S_k(eta)
    bool admissible = false;
    SymMatrix gradient;     // filled when requested
};

PointOperator evaluate_point(const SymMatrix& h, const SumHessianParams& params,
                             bool with_gradient);

} // namespace sumhess
