#include "sumhess/symfun.hpp"

#include "sumhess/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

namespace sumhess {

namespace {

void check_matches(const EigenTuple& lambda, const SumHessianParams& params) {
    if (lambda.size() != params.n) {
        throw ArgumentError("lambda has " + std::to_string(lambda.size()) + " entries but n = " +
                            std::to_string(params.n));
    }
}

void check_tuple_size(std::size_t n) {
    if (n < 2 || n > static_cast<std::size_t>(kMaxDim)) {
        throw ArgumentError("EigenTuple size must lie in [2, 16], got " + std::to_string(n));
    }
}

// Copy lambda into out, skipping the listed indices.
int gather_without(const EigenTuple& lambda, std::span<const int> deleted,
                   std::array<double, kMaxDim>& out) {
    const int n = lambda.size();
    if (deleted.empty() || deleted.size() > 2) {
        throw ArgumentError("sigma_deleted: expected one or two deleted indices");
    }
    for (int d : deleted) {
        if (d < 0 || d >= n) {
            throw ArgumentError("sigma_deleted: index " + std::to_string(d) +
                                " out of range for n = " + std::to_string(n));
        }
    }
    if (deleted.size() == 2 && deleted[0] == deleted[1]) {
        throw ArgumentError("sigma_deleted: duplicate index " + std::to_string(deleted[0]));
    }
    int len = 0;
    for (int i = 0; i < n; ++i) {
        if (std::find(deleted.begin(), deleted.end(), i) == deleted.end()) out[len++] = lambda[i];
    }
    return len;
}

} // namespace

EigenTuple::EigenTuple(std::span<const double> values) {
    check_tuple_size(values.size());
    values_.resize(static_cast<Eigen::Index>(values.size()));
    std::copy(values.begin(), values.end(), values_.data());
}

EigenTuple::EigenTuple(std::initializer_list<double> values)
    : EigenTuple(std::span<const double>(values.begin(), values.size())) {}

EigenTuple::EigenTuple(const Vector& values) {
    check_tuple_size(static_cast<std::size_t>(values.size()));
    values_ = values;
}

EigenTuple EigenTuple::sorted_descending() const {
    EigenTuple out = *this;
    std::sort(out.values_.data(), out.values_.data() + out.values_.size(), std::greater<>());
    return out;
}

EigenTuple EigenTuple::scaled(double t) const {
    EigenTuple out = *this;
    out.values_ *= t;
    return out;
}

SumHessianParams::SumHessianParams(int n_, int k_, double alpha_) : n(n_), k(k_), alpha(alpha_) {
    if (n < 2 || n > kMaxDim) throw ArgumentError("n must lie in [2, 16]");
    if (k < 1 || k > n) throw ArgumentError("k must satisfy 1 <= k <= n");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ArgumentError("alpha must be finite and >= 0");
}

double sigma(std::span<const double> values, int m) {
    const int n = static_cast<int>(values.size());
    if (m < 0 || m > n) return 0.0;
    if (m == 0) return 1.0;
    // e[j] holds sigma_j of the prefix processed so far; only j <= m is needed.
    std::array<double, kMaxDim + 1> e{};
    e[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = std::min(i + 1, m); j >= 1; --j) e[j] += values[i] * e[j - 1];
    }
    return e[m];
}

double sigma(const EigenTuple& lambda, int m) { return sigma(lambda.values(), m); }

double sigma_deleted(const EigenTuple& lambda, int m, std::span<const int> deleted) {
    std::array<double, kMaxDim> rest{};
    const int len = gather_without(lambda, deleted, rest);
    return sigma(std::span<const double>(rest.data(), len), m);
}

double sigma_deleted(const EigenTuple& lambda, int m, std::initializer_list<int> deleted) {
    return sigma_deleted(lambda, m, std::span<const int>(deleted.begin(), deleted.size()));
}

double sum_hessian(std::span<const double> values, int m, double alpha) {
    return sigma(values, m) + alpha * sigma(values, m - 1);
}

double sum_hessian(const EigenTuple& lambda, const SumHessianParams& params) {
    check_matches(lambda, params);
    return sum_hessian(lambda.values(), params.k, params.alpha);
}

double sum_hessian_deleted(const EigenTuple& lambda, int m, double alpha,
                           std::initializer_list<int> deleted) {
    std::array<double, kMaxDim> rest{};
    const int len =
        gather_without(lambda, std::span<const int>(deleted.begin(), deleted.size()), rest);
    return sum_hessian(std::span<const double>(rest.data(), len), m, alpha);
}

Vector sum_hessian_gradient(const EigenTuple& lambda, const SumHessianParams& params) {
    check_matches(lambda, params);
    const int n = lambda.size();
    Vector g(n);
    for (int p = 0; p < n; ++p) g[p] = sum_hessian_deleted(lambda, params.k - 1, params.alpha, {p});
    return g;
}

Matrix sum_hessian_hessian(const EigenTuple& lambda, const SumHessianParams& params) {
    check_matches(lambda, params);
    const int n = lambda.size();
    Matrix h = Matrix::Zero(n, n);
    if (params.k < 2) return h;
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const double v = sum_hessian_deleted(lambda, params.k - 2, params.alpha, {p, q});
            h(p, q) = v;
            h(q, p) = v;
        }
    }
    return h;
}

double binomial(int n, int m) {
    if (m < 0 || m > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= m; ++i) c = c * (n - m + i) / i;
    return c;
}

Vector maclaurin_chain(const EigenTuple& lambda) {
    const int n = lambda.size();
    Vector out(n);
    for (int m = 1; m <= n; ++m) {
        const double s = sigma(lambda, m);
        if (!(s > 0.0)) {
            throw DomainError("maclaurin_chain: sigma_" + std::to_string(m) +
                              " is not positive; lambda is outside Gamma_n");
        }
        out[m - 1] = std::pow(s / binomial(n, m), 1.0 / m);
    }
    return out;
}

Vector s_chain(const EigenTuple& lambda, const SumHessianParams& params) {
    check_matches(lambda, params);
    Vector out(params.k);
    for (int m = 1; m <= params.k; ++m) {
        const double s = sum_hessian(lambda.values(), m, params.alpha);
        if (!(s > 0.0)) {
            throw DomainError("s_chain: S_" + std::to_string(m) +
                              " is not positive; lambda is outside the admissible cone");
        }
        out[m - 1] = std::pow(s, 1.0 / m);
    }
    return out;
}

} // namespace sumhess
