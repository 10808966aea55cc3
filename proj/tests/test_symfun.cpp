#include "sumhess/errors.hpp"
#include "sumhess/symfun.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace sumhess;

namespace {

// Brute force over subsets: the definition, nothing shared with the DP.
double sigma_subsets(const std::vector<double>& v, int m) {
    const int n = static_cast<int>(v.size());
    if (m < 0 || m > n) return 0.0;
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != m) continue;
        double p = 1.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) p *= v[i];
        total += p;
    }
    return total;
}

std::vector<double> random_values(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

} // namespace

TEST_CASE("sigma on small tuples") {
    CHECK(sigma(EigenTuple{1, 2, 3}, 2) == 11.0);
    CHECK(sigma(EigenTuple{1, 1, 1, 1}, 3) == 4.0);
    CHECK(sigma(EigenTuple{1, 2, 3}, 5) == 0.0);
    CHECK(sigma(EigenTuple{1, 2, 3}, 0) == 1.0);
    CHECK(sigma(EigenTuple{1, 2, 3}, -1) == 0.0);
    CHECK(sigma(std::span<const double>{}, 0) == 1.0);
}

TEST_CASE("sigma agrees with subset enumeration") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 7;
        const auto v = random_values(rng, n);
        const EigenTuple t{std::span<const double>(v)};
        for (int m = 0; m <= n; ++m) {
            const double ref = sigma_subsets(v, m);
            CHECK(sigma(t, m) == doctest::Approx(ref).epsilon(1e-12).scale(10.0));
        }
    }
}

TEST_CASE("deleted sigma") {
    const EigenTuple t{1, 2, 3};
    // 0-based indices
    CHECK(sigma_deleted(t, 1, {1}) == 4.0);
    CHECK(sigma_deleted(t, 2, {0}) == 6.0);
    CHECK(sigma_deleted(t, 0, {0, 2}) == 1.0);
    CHECK(sigma_deleted(t, 1, {0, 2}) == 2.0);
    CHECK_THROWS_AS(sigma_deleted(t, 1, {3}), ArgumentError);
    CHECK_THROWS_AS(sigma_deleted(t, 1, {-1}), ArgumentError);
    CHECK_THROWS_AS(sigma_deleted(t, 1, {1, 1}), ArgumentError);
}

TEST_CASE("sum Hessian function values") {
    CHECK(sum_hessian(EigenTuple{1, 2, 3}, SumHessianParams(3, 2, 2.0)) == 23.0);
    CHECK(sum_hessian(EigenTuple{1, 2, 3}, SumHessianParams(3, 2, 0.0)) == 11.0);
    CHECK(sum_hessian(EigenTuple{2, 2, 2}, SumHessianParams(3, 2, 1.0)) == 18.0);
    CHECK(sum_hessian_deleted(EigenTuple{1, 2, 3}, 1, 1.0, {0}) == 6.0);
}

TEST_CASE("parameters are validated") {
    CHECK_THROWS_AS(SumHessianParams(3, 0, 0.0), ArgumentError);
    CHECK_THROWS_AS(SumHessianParams(3, 4, 0.0), ArgumentError);
    CHECK_THROWS_AS(SumHessianParams(3, 2, -1.0), ArgumentError);
    CHECK_THROWS_AS(sum_hessian(EigenTuple{1, 2}, SumHessianParams(3, 2, 0.0)), ArgumentError);
}

TEST_CASE("gradient") {
    auto g = sum_hessian_gradient(EigenTuple{1, 2, 3}, SumHessianParams(3, 2, 0.0));
    CHECK(g[0] == 5.0);
    CHECK(g[1] == 4.0);
    CHECK(g[2] == 3.0);
    g = sum_hessian_gradient(EigenTuple{1, 1, 1}, SumHessianParams(3, 3, 0.0));
    CHECK(g[0] == 1.0);
    CHECK(g[2] == 1.0);
    g = sum_hessian_gradient(EigenTuple{1, 2, 3}, SumHessianParams(3, 2, 1.0));
    CHECK(g[0] == doctest::Approx(6.0));
    CHECK(g[1] == doctest::Approx(5.0));
    CHECK(g[2] == doctest::Approx(4.0));
}

TEST_CASE("gradient matches central differences") {
    std::mt19937_64 rng(5);
    const double h = 1e-6;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 7;
        const SumHessianParams p(n, 1 + trial % n, (trial % 3) * 0.75);
        const auto v = random_values(rng, n);
        const EigenTuple t{std::span<const double>(v)};
        const Vector g = sum_hessian_gradient(t, p);
        const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
        for (int i = 0; i < n; ++i) {
            auto plus = v, minus = v;
            plus[i] += h;
            minus[i] -= h;
            const double fd = (sum_hessian(plus, p.k, p.alpha) - sum_hessian(minus, p.k, p.alpha)) / (2 * h);
            CHECK(std::abs(fd - g[i]) / scale <= 1e-6);
        }
    }
}

TEST_CASE("hessian") {
    Matrix h = sum_hessian_hessian(EigenTuple{1, 2, 3}, SumHessianParams(3, 2, 0.0));
    CHECK(h(0, 1) == 1.0);
    CHECK(h(0, 0) == 0.0);
    h = sum_hessian_hessian(EigenTuple{1, 2, 3}, SumHessianParams(3, 3, 0.0));
    CHECK(h(0, 2) == doctest::Approx(2.0));
    CHECK(h(2, 0) == doctest::Approx(2.0));
    h = sum_hessian_hessian(EigenTuple{0.3, -1.2, 2.5, 4.0}, SumHessianParams(4, 1, 3.0));
    CHECK(h.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hessian matches mixed differences") {
    std::mt19937_64 rng(8);
    const double h = 1e-4;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 5;
        const SumHessianParams p(n, 1 + trial % n, 0.5);
        const auto v = random_values(rng, n);
        const Matrix hs = sum_hessian_hessian(EigenTuple(std::span<const double>(v)), p);
        const double scale = std::max(1.0, hs.cwiseAbs().maxCoeff());
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                auto at = [&](double di, double dj) {
                    auto w = v;
                    w[i] += di;
                    w[j] += dj;
                    return sum_hessian(w, p.k, p.alpha);
                };
                const double fd = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
                CHECK(std::abs(fd - hs(i, j)) / scale <= 1e-5);
            }
        }
    }
}

TEST_CASE("maclaurin chain") {
    Vector c = maclaurin_chain(EigenTuple{1, 1, 1});
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[2] == doctest::Approx(1.0));
    c = maclaurin_chain(EigenTuple{4, 1});
    CHECK(c[0] == doctest::Approx(2.5));
    CHECK(c[1] == doctest::Approx(2.0));
    c = maclaurin_chain(EigenTuple{3, 2, 1});
    CHECK(c[0] >= c[1]);
    CHECK(c[1] >= c[2]);
    CHECK_THROWS_AS(maclaurin_chain(EigenTuple{3, -1, 1}), DomainError);
}

TEST_CASE("s chain") {
    Vector c = s_chain(EigenTuple{1, 1, 1}, SumHessianParams(3, 2, 0.0));
    CHECK(c[0] == doctest::Approx(3.0));
    CHECK(c[1] == doctest::Approx(std::sqrt(3.0)));
    c = s_chain(EigenTuple{1, 1, 1}, SumHessianParams(3, 2, 1.0));
    CHECK(c[0] == doctest::Approx(4.0));
    CHECK(c[1] == doctest::Approx(std::sqrt(6.0)));
    CHECK_THROWS_AS(s_chain(EigenTuple{1, 1, -5}, SumHessianParams(3, 2, 0.0)), DomainError);
}

TEST_CASE("binomial") {
    CHECK(binomial(8, 4) == 70.0);
    CHECK(binomial(3, 0) == 1.0);
    CHECK(binomial(3, 4) == 0.0);
}
