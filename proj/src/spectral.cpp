#include "sumhess/spectral.hpp"

#include "sumhess/cones.hpp"
#include "sumhess/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace sumhess {

namespace {

constexpr int kMaxSweeps = 50;
constexpr double kOffDiagonalTolerance = 1e-13;
constexpr double kDegenerateGap = 1e-8;

void check_dim(Eigen::Index rows, Eigen::Index cols) {
    if (rows != cols || rows < 2 || rows > kMaxMatrixDim) {
        throw ArgumentError("SymMatrix: dimension must be square in [2, 8]");
    }
}

double off_diagonal_norm(const SmallMatrix& a) {
    double s = 0.0;
    for (Eigen::Index p = 0; p < a.rows(); ++p)
        for (Eigen::Index q = 0; q < a.cols(); ++q)
            if (p != q) s += a(p, q) * a(p, q);
    return std::sqrt(s);
}

// Eigenframe quantities shared by the gradient and second-derivative routines.
struct Frame {
    EigenDecomposition eig;
    EigenTuple eta;
    Vector t;   // lambda-side partials
};

Frame frame_quantities(const SymMatrix& h, const SumHessianParams& params) {
    Frame f{eigen_sym(h), {}, {}};
    f.eta = eta(f.eig.values);
    const Vector g = sum_hessian_gradient(f.eta, params);
    f.t = Vector::Constant(g.size(), g.sum()) - g;
    return f;
}

SumHessianParams params_for(const SymMatrix& h, const SumHessianParams& params) {
    if (params.n != h.dim()) {
        throw ArgumentError("matrix dimension " + std::to_string(h.dim()) +
                            " does not match n = " + std::to_string(params.n));
    }
    return params;
}

} // namespace

SymMatrix::SymMatrix(const SmallMatrix& m) {
    check_dim(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
            if (!(std::abs(m(i, j) - m(j, i)) <= 1e-14)) {
                throw ArgumentError("SymMatrix: entries (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") not symmetric");
            }
        }
    }
    m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::symmetrized(const SmallMatrix& m) {
    check_dim(m.rows(), m.cols());
    SymMatrix out;
    out.m_ = 0.5 * (m + m.transpose());
    return out;
}

SymMatrix SymMatrix::identity(int dim) {
    check_dim(dim, dim);
    return SymMatrix(SmallMatrix::Identity(dim, dim));
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
    const int n = static_cast<int>(d.size());
    check_dim(n, n);
    SmallMatrix m = SmallMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = d[i];
    return SymMatrix(m);
}

EigenDecomposition eigen_sym(const SymMatrix& m) {
    const int n = m.dim();
    SmallMatrix a = m.matrix();
    SmallMatrix v = SmallMatrix::Identity(n, n);
    const double scale = a.norm();

    int sweep = 0;
    for (; sweep <= kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= kOffDiagonalTolerance * scale) break;
        if (sweep == kMaxSweeps) {
            throw NumericalError("eigen_sym: no convergence after 50 Jacobi sweeps");
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // A <- J^T A J with J the (p,q) rotation.
                for (int r = 0; r < n; ++r) {
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                }
                for (int r = 0; r < n; ++r) {
                    const double apr = a(p, r);
                    const double aqr = a(q, r);
                    a(p, r) = c * apr - s * aqr;
                    a(q, r) = s * apr + c * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }

    std::array<int, kMaxMatrixDim> order{};
    std::iota(order.begin(), order.begin() + n, 0);
    std::stable_sort(order.begin(), order.begin() + n,
                     [&](int i, int j) { return a(i, i) > a(j, j); });

    Vector values(n);
    SmallMatrix frame(n, n);
    for (int i = 0; i < n; ++i) {
        values[i] = a(order[i], order[i]);
        frame.col(i) = v.col(order[i]);
    }
    return {EigenTuple(values), frame};
}

SymMatrix u_operator(const SymMatrix& h) {
    const int n = h.dim();
    return SymMatrix(h.trace() * SmallMatrix::Identity(n, n) - h.matrix());
}

double operator_value(const SymMatrix& h, const SumHessianParams& params, OperatorMode mode) {
    const SumHessianParams p = params_for(h, params);
    const double s = sum_hessian(eta(eigen_sym(h).values), p);
    if (mode == OperatorMode::Raw) return s;
    if (!(s > 0.0)) {
        throw DomainError("operator_value: S_k(eta) = " + std::to_string(s) +
                          " has no positive k-th root");
    }
    return std::pow(s, 1.0 / p.k);
}

SymMatrix operator_gradient(const SymMatrix& h, const SumHessianParams& params) {
    const Frame f = frame_quantities(h, params_for(h, params));
    const SmallMatrix& q = f.eig.frame;
    return SymMatrix::symmetrized(q * f.t.asDiagonal() * q.transpose());
}

Vector t_coefficients(const SymMatrix& h, const SumHessianParams& params) {
    return frame_quantities(h, params_for(h, params)).t;
}

double operator_second_derivative(const SymMatrix& h, const SymMatrix& a,
                                  const SumHessianParams& params) {
    const SumHessianParams p = params_for(h, params);
    if (a.dim() != h.dim()) throw ArgumentError("operator_second_derivative: dimension mismatch");
    const int n = h.dim();
    const Frame f = frame_quantities(h, p);
    const EigenTuple& lambda = f.eig.values;

    // lambda-space Hessian of S_k(eta(lambda)): J H_eta J with J = 11^T - I.
    const Matrix h_eta = sum_hessian_hessian(f.eta, p);
    const Matrix jac = Matrix::Ones(n, n) - Matrix::Identity(n, n);
    const Matrix f_ll = jac * h_eta * jac;

    const SmallMatrix at = f.eig.frame.transpose() * a.matrix() * f.eig.frame;
    const double gap = kDegenerateGap * std::max(1.0, lambda.vector().cwiseAbs().maxCoeff());

    double value = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) value += f_ll(i, j) * at(i, i) * at(j, j);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dl = lambda[i] - lambda[j];
            const double divided =
                std::abs(dl) < gap ? f_ll(i, i) - f_ll(i, j) : (f.t[i] - f.t[j]) / dl;
            value += 2.0 * divided * at(i, j) * at(i, j);
        }
    }
    return value;
}

PointOperator evaluate_point(const SymMatrix& h, const SumHessianParams& params,
                             bool with_gradient) {
    PointOperator out;
    EigenDecomposition eig = eigen_sym(h);
    out.lambda = eig.values;
    out.eta = eta(eig.values);
    out.value = sum_hessian(out.eta, params);
    out.admissible = in_gamma_tilde(out.eta, params);
    if (with_gradient) {
        const Vector g = sum_hessian_gradient(out.eta, params);
        const Vector t = Vector::Constant(g.size(), g.sum()) - g;
        out.gradient = SymMatrix::symmetrized(eig.frame * t.asDiagonal() * eig.frame.transpose());
    }
    return out;
}

} // namespace sumhess
