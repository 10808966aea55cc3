#pragma once

// Elementary symmetric polynomials and the sum Hessian function
//
//   S_m(lambda) = sigma_m(lambda) + alpha * sigma_{m-1}(lambda)
//
// together with their first and second partial derivatives in lambda-space.
// Everything here is a pure function of its arguments.

#include <Eigen/Core>

#include <initializer_list>
#include <span>

namespace sumhess {

inline constexpr int kMaxDim = 16;

using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

/// A point lambda in R^n, 2 <= n <= 16. Storage is inline (no heap).
class EigenTuple {
public:
    EigenTuple() = default;
    explicit EigenTuple(std::span<const double> values);
    EigenTuple(std::initializer_list<double> values);
    explicit EigenTuple(const Vector& values);

    int size() const noexcept { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }
    double& operator[](int i) { return values_[i]; }

    std::span<const double> values() const noexcept {
        return {values_.data(), static_cast<std::size_t>(values_.size())};
    }
    const Vector& vector() const noexcept { return values_; }

    EigenTuple sorted_descending() const;
    EigenTuple scaled(double t) const;

    friend bool operator==(const EigenTuple& a, const EigenTuple& b) {
        return a.values_.size() == b.values_.size() && a.values_ == b.values_;
    }

private:
    Vector values_;
};

/// (n, k, alpha) of one sum Hessian operator; 1 <= k <= n, alpha >= 0.
struct SumHessianParams {
    int n = 2;
    int k = 1;
    double alpha = 0.0;

    SumHessianParams() = default;
    SumHessianParams(int n_, int k_, double alpha_);
};

/// sigma_m over an arbitrary (possibly empty) list of values. sigma_0 = 1 and
/// sigma_m = 0 for m < 0 or m > size. O(size * m) product expansion.
double sigma(std::span<const double> values, int m);
double sigma(const EigenTuple& lambda, int m);

/// sigma_m of lambda with one or two coordinates removed (0-based indices).
/// Throws ArgumentError on out-of-range or duplicate indices.
double sigma_deleted(const EigenTuple& lambda, int m, std::initializer_list<int> deleted);
double sigma_deleted(const EigenTuple& lambda, int m, std::span<const int> deleted);

/// S_m = sigma_m + alpha sigma_{m-1} over a raw value list (used for S_{k-1}(lambda|i) etc).
double sum_hessian(std::span<const double> values, int m, double alpha);

/// S_k(lambda) with the order and alpha taken from params.
double sum_hessian(const EigenTuple& lambda, const SumHessianParams& params);

/// S_k(lambda | deleted) = sigma_k(lambda|.) + alpha sigma_{k-1}(lambda|.).
double sum_hessian_deleted(const EigenTuple& lambda, int m, double alpha,
                           std::initializer_list<int> deleted);

/// dS_k/dlambda_p = S_{k-1}(lambda|p).
Vector sum_hessian_gradient(const EigenTuple& lambda, const SumHessianParams& params);

/// Hessian of S_k in lambda-space: entry (p,q), p != q, is S_{k-2}(lambda|pq);
/// the diagonal vanishes because S_k is affine in each coordinate.
Matrix sum_hessian_hessian(const EigenTuple& lambda, const SumHessianParams& params);

/// ((sigma_m / C(n,m))^{1/m})_{m=1..n}. Throws DomainError when some sigma_m <= 0.
Vector maclaurin_chain(const EigenTuple& lambda);

/// (S_m^{1/m})_{m=1..k}. Throws DomainError when some S_m <= 0.
Vector s_chain(const EigenTuple& lambda, const SumHessianParams& params);

/// Binomial coefficient as a double, 0 outside 0 <= m <= n.
double binomial(int n, int m);

} // namespace sumhess
