#include "sumhess/cones.hpp"
#include "sumhess/errors.hpp"
#include "sumhess/spectral.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace sumhess;

namespace {

SymMatrix random_sym(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    SmallMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = d(rng);
    return SymMatrix(m);
}

SymMatrix diag(std::initializer_list<double> d) {
    return SymMatrix::diagonal(std::span<const double>(d.begin(), d.size()));
}

// F through Eigen's own solver, independent of the Jacobi implementation.
double reference_value(const SymMatrix& h, const SumHessianParams& p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(h.matrix()));
    const Eigen::VectorXd l = es.eigenvalues();
    std::vector<double> e(l.size());
    for (int i = 0; i < l.size(); ++i) e[i] = l.sum() - l[i];
    return sum_hessian(e, p.k, p.alpha);
}

} // namespace

TEST_CASE("jacobi eigenvalues") {
    auto d = eigen_sym(diag({3, 1}));
    CHECK(d.values == EigenTuple{3, 1});
    CHECK((d.frame - SmallMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

    SmallMatrix swap(2, 2);
    swap << 0, 1, 1, 0;
    d = eigen_sym(SymMatrix(swap));
    CHECK(d.values[0] == doctest::Approx(1.0));
    CHECK(d.values[1] == doctest::Approx(-1.0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(d.frame(0, 0)) == doctest::Approx(r));
    CHECK(d.frame(0, 0) * d.frame(1, 0) == doctest::Approx(0.5));
    CHECK(d.frame(0, 1) * d.frame(1, 1) == doctest::Approx(-0.5));
}

TEST_CASE("jacobi reconstruction and ordering") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 7;
        const SymMatrix h = random_sym(rng, n, -3.0, 3.0);
        const auto d = eigen_sym(h);
        SmallMatrix lam = SmallMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) lam(i, i) = d.values[i];
        const SmallMatrix rec = d.frame * lam * d.frame.transpose();
        CHECK((rec - h.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((d.frame.transpose() * d.frame - SmallMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
        for (int i = 0; i + 1 < n; ++i) CHECK(d.values[i] >= d.values[i + 1]);
    }
}

TEST_CASE("symmetric matrix validation") {
    SmallMatrix m(2, 2);
    m << 1, 2, 2.1, 1;
    CHECK_THROWS_AS(SymMatrix{m}, ArgumentError);
    CHECK_NOTHROW(SymMatrix::symmetrized(m));
    CHECK_THROWS_AS(SymMatrix::identity(1), ArgumentError);
    CHECK_THROWS_AS(SymMatrix::identity(9), ArgumentError);
}

TEST_CASE("U operator") {
    CHECK(u_operator(SymMatrix::identity(3)).matrix() == (2.0 * SmallMatrix::Identity(3, 3)));
    CHECK(u_operator(diag({1, 2, 3})).matrix() == diag({5, 4, 3}).matrix());
}

TEST_CASE("operator value") {
    CHECK(operator_value(SymMatrix::identity(3), SumHessianParams(3, 2, 1.0)) == 18.0);
    CHECK(operator_value(diag({1, 2, 3}), SumHessianParams(3, 1, 0.0)) == doctest::Approx(12.0));
    CHECK(operator_value(SymMatrix::identity(3), SumHessianParams(3, 2, 1.0), OperatorMode::Normalized) ==
          doctest::Approx(std::sqrt(18.0)));
    CHECK_THROWS_AS(operator_value(diag({-1, -1, -1}), SumHessianParams(3, 3, 0.0), OperatorMode::Normalized),
                    DomainError);

    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 4;
        const SumHessianParams p(n, 1 + trial % n, 0.5 * (trial % 3));
        const SymMatrix h = random_sym(rng, n);
        const double ref = reference_value(h, p);
        CHECK(std::abs(operator_value(h, p) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("operator gradient") {
    std::mt19937_64 rng(21);
    const SymMatrix g1 = operator_gradient(random_sym(rng, 2), SumHessianParams(2, 1, 0.0));
    CHECK((g1.matrix() - SmallMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
    const SymMatrix g2 = operator_gradient(SymMatrix::identity(3), SumHessianParams(3, 2, 0.0));
    CHECK((g2.matrix() - 8.0 * SmallMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);

    const SumHessianParams p(3, 2, 1.0);
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        const SymMatrix m = random_sym(rng, 3);
        const SymMatrix g = operator_gradient(m, p);
        const double scale = std::max(1.0, g.matrix().cwiseAbs().maxCoeff());
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                SmallMatrix plus = m.matrix(), minus = m.matrix();
                plus(i, j) += h;
                minus(i, j) -= h;
                if (i != j) {
                    plus(j, i) += h;
                    minus(j, i) -= h;
                }
                const double fd = (operator_value(SymMatrix(plus), p) - operator_value(SymMatrix(minus), p)) / (2 * h);
                const double exact = i == j ? g(i, i) : 2.0 * g(i, j);
                CHECK(std::abs(fd - exact) / scale <= 1e-6);
            }
        }
    }
}

TEST_CASE("t coefficients") {
    // H = diag(3,2,1): eta = (3,4,5), g = dS_2/deta = (9,8,7), t_i = 24 - g_i.
    const Vector t = t_coefficients(diag({3, 2, 1}), SumHessianParams(3, 2, 0.0));
    CHECK(t[0] == doctest::Approx(15.0));
    CHECK(t[1] == doctest::Approx(16.0));
    CHECK(t[2] == doctest::Approx(17.0));
}

TEST_CASE("second directional derivative") {
    const SumHessianParams p(2, 2, 0.0);
    const SymMatrix h = diag({1, 2});
    const SymMatrix a = diag({1, 0});
    const double fd_h = 1e-3;
    auto fd = [&](const SymMatrix& m, const SymMatrix& dir, const SumHessianParams& q) {
        return (operator_value(SymMatrix(m.matrix() + fd_h * dir.matrix()), q) - 2.0 * operator_value(m, q) +
                operator_value(SymMatrix(m.matrix() - fd_h * dir.matrix()), q)) /
               (fd_h * fd_h);
    };
    // n = 2: eta = (l2, l1) so F = l1 l2 = det H, and d^2/ds^2 det(H + sA) = 2 det A = 0 here.
    CHECK(std::abs(operator_second_derivative(h, a, p) - fd(h, a, p)) <= 1e-4);
    CHECK(operator_second_derivative(h, a, p) == doctest::Approx(0.0));

    std::mt19937_64 rng(30);
    for (int trial = 0; trial < 100; ++trial) {
        const SumHessianParams q(3, 1 + trial % 3, 0.5 * (trial % 3));
        const SymMatrix dir = random_sym(rng, 3);
        const SymMatrix id = SymMatrix::identity(3);
        const double v = operator_second_derivative(id, dir, q);
        CHECK(std::isfinite(v));
        CHECK(std::abs(v - fd(id, dir, q)) <= 1e-4);
        // two equal eigenvalues
        const auto d = eigen_sym(random_sym(rng, 3));
        SmallMatrix lam = SmallMatrix::Zero(3, 3);
        lam(0, 0) = lam(1, 1) = 0.7;
        lam(2, 2) = -0.4;
        const SymMatrix rep = SymMatrix::symmetrized(d.frame * lam * d.frame.transpose());
        CHECK(std::abs(operator_second_derivative(rep, dir, q) - fd(rep, dir, q)) <= 1e-4);
        const SymMatrix m = random_sym(rng, 3);
        CHECK(std::abs(operator_second_derivative(m, dir, q) - fd(m, dir, q)) <= 1e-4);
    }
}

TEST_CASE("point operator bundles value, cone test and gradient") {
    const SumHessianParams p(3, 2, 1.0);
    const PointOperator op = evaluate_point(SymMatrix::identity(3), p, true);
    CHECK(op.value == 18.0);
    CHECK(op.admissible);
    CHECK(op.eta == EigenTuple{2, 2, 2});
    CHECK(op.gradient(0, 0) == doctest::Approx(10.0));  // t_i = sum over j != i of S_1(eta|j) = 5
    CHECK_FALSE(evaluate_point(diag({-1, -1, -1}), p, false).admissible);
}
