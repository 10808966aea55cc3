#include "sumhess/suites.hpp"

#include "sumhess/cones.hpp"
#include "sumhess/errors.hpp"
#include "sumhess/format.hpp"
#include "sumhess/spectral.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <functional>
#include <random>

namespace sumhess {

namespace {

// Per-check random streams, so adding a check never perturbs another one.
std::uint64_t mix(std::uint64_t seed, const SumHessianParams& p, std::uint64_t salt) {
    std::uint64_t a = 0;
    std::memcpy(&a, &p.alpha, sizeof a);
    std::uint64_t h = seed ^ 0x9E3779B97F4A7C15ull;
    for (std::uint64_t v : {static_cast<std::uint64_t>(p.n), static_cast<std::uint64_t>(p.k), a, salt}) {
        h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ull;
        h = (h ^ (h >> 27)) * 0x94D049BB133111EBull;
        h ^= h >> 31;
    }
    return h;
}

std::vector<double> uniform_values(std::mt19937_64& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = dist(rng);
    return v;
}

EigenTuple uniform_tuple(std::mt19937_64& rng, int n, double lo, double hi) {
    const auto v = uniform_values(rng, n, lo, hi);
    return EigenTuple(std::span<const double>(v));
}

std::string describe(std::span<const double> v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
    return s + ")";
}

std::string describe(const EigenTuple& t) { return describe(t.values()); }

class Check {
public:
    Check(std::string suite, std::string name) {
        r_.suite = std::move(suite);
        r_.name = std::move(name);
    }

    /// violation <= limit passes; worst tracks the largest violation.
    void record(double violation, double limit, const std::function<std::string()>& where) {
        if (r_.cases == 0 || violation > r_.worst || std::isnan(violation)) r_.worst = violation;
        ++r_.cases;
        if (!(violation <= limit)) {
            if (r_.failures == 0) r_.first_failure = where();
            ++r_.failures;
        }
    }

    void require(bool ok, const std::function<std::string()>& where) { record(ok ? 0.0 : 1.0, 0.0, where); }

    void observe_constant(double c) { r_.constant = r_.constant ? std::min(*r_.constant, c) : c; }

    /// Turns the empirical constant into a pass/fail against a floor.
    void require_constant_above(double floor) {
        if (r_.constant && !(*r_.constant > floor)) {
            if (r_.failures == 0) r_.first_failure = "empirical constant " + format_double(*r_.constant) +
                                                      " not above " + format_double(floor);
            ++r_.failures;
        }
    }

    CheckResult skip() {
        r_.skipped = true;
        return r_;
    }
    CheckResult result() const { return r_; }

private:
    CheckResult r_;
};

std::vector<double> abs_values(const EigenTuple& t) {
    std::vector<double> v(t.values().begin(), t.values().end());
    for (double& x : v) x = std::abs(x);
    return v;
}

std::vector<double> with_value(std::span<const double> v, int i, double x) {
    std::vector<double> out(v.begin(), v.end());
    out[static_cast<std::size_t>(i)] = x;
    return out;
}

std::vector<double> without(std::span<const double> v, int i) {
    std::vector<double> out;
    for (int j = 0; j < static_cast<int>(v.size()); ++j)
        if (j != i) out.push_back(v[static_cast<std::size_t>(j)]);
    return out;
}

double s_of(const std::vector<double>& v, int m, double alpha) { return sum_hessian(std::span<const double>(v), m, alpha); }

// Relative error of a computed identity, normalized by a magnitude bound.
double rel(double lhs, double rhs, double magnitude) {
    return std::abs(lhs - rhs) / std::max(1.0, magnitude);
}

SmallMatrix random_orthogonal(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SmallMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
    Eigen::HouseholderQR<SmallMatrix> qr(m);
    return qr.householderQ();
}

SymMatrix random_symmetric(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SmallMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = dist(rng);
    return SymMatrix(m);
}

SymMatrix rotated_diagonal(const EigenTuple& lambda, const SmallMatrix& q) {
    const int n = static_cast<int>(lambda.size());
    SmallMatrix d = SmallMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = lambda[i];
    return SymMatrix::symmetrized(q * d * q.transpose());
}

std::string describe(const SymMatrix& h) {
    std::vector<double> v;
    for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < h.dim(); ++j) v.push_back(h(i, j));
    return describe(v);
}

// lambda-side partials t_i = sum_j g_j - g_i with g = dS(eta).
Vector lambda_partials(const Vector& g) {
    return Vector::Constant(g.size(), g.sum()) - g;
}

Matrix lambda_hessian(const Matrix& h_eta) {
    const Eigen::Index n = h_eta.rows();
    const Matrix j = Matrix::Ones(n, n) - Matrix::Identity(n, n);
    return j * h_eta * j;
}

} // namespace

std::vector<CheckResult> identity_suite(const SumHessianParams& params, const SuiteOptions& options) {
    const int n = params.n;
    const int k = params.k;
    const double a = params.alpha;
    const double tol = options.tol.identity_rel;
    std::mt19937_64 rng(mix(options.seed, params, 1));

    Check grad("identities", "gradient_is_deleted_sum");
    Check hess("identities", "hessian_is_double_deleted_sum");
    Check expand("identities", "deletion_expansion");
    Check dsum("identities", "deleted_sum");
    Check euler("identities", "euler_identity");

    for (int c = 0; c < options.count; ++c) {
        const EigenTuple lambda = uniform_tuple(rng, n, -2.0, 2.0);
        const auto v = lambda.values();
        const auto mu = abs_values(lambda);
        auto where = [&] { return describe(lambda); };

        // S_k is affine in each coordinate, so exact differences give the partials.
        const Vector g = sum_hessian_gradient(lambda, params);
        double worst = 0.0;
        for (int p = 0; p < n; ++p) {
            const double diff = s_of(with_value(v, p, 1.0), k, a) - s_of(with_value(v, p, 0.0), k, a);
            worst = std::max(worst, rel(g[p], diff, s_of(with_value(mu, p, 1.0), k, a)));
        }
        grad.record(worst, tol, where);

        const Matrix h = sum_hessian_hessian(lambda, params);
        worst = 0.0;
        for (int p = 0; p < n; ++p) {
            const double curv = s_of(with_value(v, p, 2.0), k, a) - 2.0 * s_of(with_value(v, p, 1.0), k, a) +
                                s_of(with_value(v, p, 0.0), k, a);
            worst = std::max(worst, rel(h(p, p), curv, s_of(with_value(mu, p, 2.0), k, a)));
            for (int q = p + 1; q < n; ++q) {
                auto at = [&](double xp, double xq) { return s_of(with_value(with_value(v, p, xp), q, xq), k, a); };
                const double mixed = at(1, 1) - at(1, 0) - at(0, 1) + at(0, 0);
                const double mag = s_of(with_value(with_value(mu, p, 1.0), q, 1.0), k, a);
                worst = std::max({worst, rel(h(p, q), mixed, mag), rel(h(q, p), mixed, mag)});
            }
        }
        hess.record(worst, tol, where);

        const double s = sum_hessian(lambda, params);
        worst = 0.0;
        double lhs4 = 0.0, mag4 = 0.0, lhs5 = 0.0, mag5 = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto rest = without(v, i);
            const auto rest_mu = without(mu, i);
            const double s_km1 = s_of(rest, k - 1, a);
            const double s_k = s_of(rest, k, a);
            const double m_km1 = s_of(rest_mu, k - 1, a);
            const double m_k = s_of(rest_mu, k, a);
            worst = std::max(worst, rel(s, v[i] * s_km1 + s_k, mu[i] * m_km1 + m_k));
            lhs4 += s_k;
            mag4 += m_k;
            lhs5 += v[i] * s_km1;
            mag5 += mu[i] * m_km1;
        }
        expand.record(worst, tol, where);

        const double sig_km1 = sigma(lambda, k - 1);
        const double s_mu = s_of(mu, k, a);
        const double sig_mu = sigma(std::span<const double>(mu), k - 1);
        dsum.record(rel(lhs4, (n - k) * s + a * sig_km1, mag4 + (n - k) * s_mu + a * sig_mu), tol, where);
        euler.record(rel(lhs5, k * s - a * sig_km1, mag5 + k * s_mu + a * sig_mu), tol, where);
    }
    return {grad.result(), hess.result(), expand.result(), dsum.result(), euler.result()};
}

std::vector<CheckResult> inequality_suite(const SumHessianParams& params, const SuiteOptions& options) {
    const int n = params.n;
    const int k = params.k;
    const double a = params.alpha;
    const SuiteTolerances& tol = options.tol;
    const int count = options.count;
    const int pairs = std::max(1, count / 2);
    std::vector<CheckResult> out;

    auto batch = [&](ConeId cone, const SumHessianParams& p, std::uint64_t salt) {
        return sample_cone(cone, p, count, mix(options.seed, params, salt)).samples;
    };

    {
        Check c("inequalities", "newton_inequality");
        std::mt19937_64 rng(mix(options.seed, params, 11));
        for (int i = 0; i < count; ++i) {
            const EigenTuple lambda = uniform_tuple(rng, n, -2.0, 2.0);
            const auto v = lambda.values();
            const double sk = sum_hessian(v, k, a);
            const double d = sk * sk - sum_hessian(v, k - 1, a) * sum_hessian(v, k + 1, a);
            c.record(-d / std::max(1.0, sk * sk), tol.newton_rel, [&] { return describe(lambda); });
        }
        out.push_back(c.result());
    }

    {
        Check c("inequalities", "root_gradient_sum");
        const double bound = std::pow(binomial(n, k), 1.0 / k);
        for (const EigenTuple& lambda : batch(ConeId::GammaK, SumHessianParams(n, k, 0.0), 12)) {
            const double sk = sigma(lambda, k);
            double sum = 0.0;
            for (int i = 0; i < n; ++i) sum += std::pow(sk, 1.0 / k - 1.0) * sigma_deleted(lambda, k - 1, {i}) / k;
            c.record(bound - sum, tol.gradient_sum_abs, [&] { return describe(lambda); });
            c.observe_constant(sum / bound);
        }
        out.push_back(c.result());
    }

    {
        Check c("inequalities", "maclaurin_chain");
        for (const EigenTuple& lambda : batch(ConeId::GammaK, SumHessianParams(n, n, 0.0), 13)) {
            const Vector chain = maclaurin_chain(lambda);
            double worst = -1.0;
            for (int m = 0; m + 1 < n; ++m)
                worst = std::max(worst, (chain[m + 1] - chain[m]) / std::max(1.0, chain[m]));
            c.record(worst, tol.ordering_rel, [&] { return describe(lambda); });
        }
        out.push_back(c.result());
    }

    const std::vector<EigenTuple> tilde = batch(ConeId::GammaTildeK, params, 14);

    {
        Check c("inequalities", "cone_nesting");
        if (k == 1) {
            out.push_back(c.skip());
        } else {
            const SumHessianParams lower(n, k - 1, a);
            for (const EigenTuple& lambda : tilde)
                c.require(in_gamma_tilde(lambda, lower), [&] { return describe(lambda); });
            out.push_back(c.result());
        }
    }

    {
        Check c("inequalities", "cone_convexity");
        std::mt19937_64 rng(mix(options.seed, params, 15));
        std::uniform_int_distribution<std::size_t> pick(0, tilde.size() - 1);
        for (int i = 0; i < pairs; ++i) {
            const EigenTuple& x = tilde[pick(rng)];
            const EigenTuple& y = tilde[pick(rng)];
            const EigenTuple mid((x.vector() + y.vector()) * 0.5);
            c.require(in_gamma_tilde(mid, params), [&] { return describe(x) + " and " + describe(y); });
        }
        out.push_back(c.result());
    }

    for (const auto& [name, t] : {std::pair<const char*, double>{"cone_scaling_down", 0.5}, {"cone_scaling_up", 2.0}}) {
        Check c("inequalities", name);
        for (const EigenTuple& lambda : tilde)
            c.require(in_gamma_tilde(lambda.scaled(t), params), [&] { return describe(lambda); });
        out.push_back(c.result());
    }

    {
        Check order("inequalities", "deleted_ordering");
        Check ratio("inequalities", "deleted_ratio_constant");
        for (const EigenTuple& raw : tilde) {
            const EigenTuple lambda = raw.sorted_descending();
            auto where = [&] { return describe(lambda); };
            std::vector<double> d(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = sum_hessian_deleted(lambda, k - 1, a, {i});
            double worst = d[0] > 0.0 ? -1.0 : 1.0;
            if (k >= 2 && !(lambda[k - 2] > 0.0)) worst = 1.0;
            for (int i = 0; i + 1 < n; ++i)
                worst = std::max(worst, (d[i] - d[i + 1]) / std::max({1.0, std::abs(d[i]), std::abs(d[i + 1])}));
            order.record(worst, tol.ordering_rel, where);
            ratio.observe_constant(d[static_cast<std::size_t>(k - 1)] / sum_hessian(lambda.values(), k - 1, a));
        }
        ratio.require_constant_above(tol.constant_floor);
        out.push_back(order.result());
        out.push_back(ratio.result());
    }

    {
        Check c("inequalities", "s_chain");
        if (n < 3) {
            out.push_back(c.skip());
        } else {
            for (const EigenTuple& lambda : tilde) {
                const Vector chain = s_chain(lambda, params);
                double worst = -1.0;
                for (int m = 0; m + 1 < k; ++m)
                    worst = std::max(worst, (chain[m + 1] - chain[m]) / std::max(1.0, chain[m]));
                c.record(worst, tol.ordering_rel, [&] { return describe(lambda); });
            }
            out.push_back(c.result());
        }
    }

    {
        Check c("inequalities", "concavity_bound");
        std::mt19937_64 rng(mix(options.seed, params, 16));
        for (const EigenTuple& lambda : tilde) {
            const Vector xi = Eigen::Map<const Vector>(uniform_values(rng, n, -1.0, 1.0).data(), n);
            const double lhs = xi.dot(sum_hessian_hessian(lambda, params) * xi);
            const double lin = sum_hessian_gradient(lambda, params).dot(xi);
            const double rhs = (1.0 - 1.0 / k) * lin * lin / sum_hessian(lambda, params);
            c.record((lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}), tol.concavity_abs,
                     [&] { return describe(lambda); });
        }
        out.push_back(c.result());
    }

    const std::vector<EigenTuple> prime = batch(ConeId::GammaTildePrimeK, params, 17);

    {
        Check c("inequalities", "operator_concavity");
        std::mt19937_64 rng(mix(options.seed, params, 18));
        for (int i = 0; i < pairs && i < static_cast<int>(prime.size()); ++i) {
            const SymMatrix h = rotated_diagonal(prime[static_cast<std::size_t>(i)], random_orthogonal(rng, n));
            const SymMatrix dir = random_symmetric(rng, n);
            const double f = operator_value(h, params);
            const double f1 = operator_gradient(h, params).matrix().cwiseProduct(dir.matrix()).sum();
            const double f2 = operator_second_derivative(h, dir, params);
            const double root2 = std::pow(f, 1.0 / k - 1.0) * f2 / k +
                                 (1.0 / k) * (1.0 / k - 1.0) * std::pow(f, 1.0 / k - 2.0) * f1 * f1;
            c.record(root2, tol.operator_concavity_abs, [&] { return describe(h) + " along " + describe(dir); });
        }
        out.push_back(c.result());
    }

    Check bound("inequalities", "operator_concavity_bound");
    Check eta_order("inequalities", "eta_ordering");
    Check theta("inequalities", "eta_deleted_ratio");
    Check eta_partials("inequalities", "eta_partials_ordering");
    Check lam_partials("inequalities", "lambda_partials_ordering");
    Check ellip("inequalities", "ellipticity_ratio");
    Check trace("inequalities", "trace_lower_bound");
    Check root_order("inequalities", "root_gradient_ordering");
    std::mt19937_64 rng(mix(options.seed, params, 19));
    for (const EigenTuple& raw : prime) {
        const EigenTuple lambda = raw.sorted_descending();
        const EigenTuple e = eta(lambda);
        auto where = [&] { return describe(lambda); };
        const double s = sum_hessian(e, params);
        const Vector g = sum_hessian_gradient(e, params);
        const Vector t = lambda_partials(g);

        const Vector xi = Eigen::Map<const Vector>(uniform_values(rng, n, -1.0, 1.0).data(), n);
        const double lhs = xi.dot(lambda_hessian(sum_hessian_hessian(e, params)) * xi);
        const double lin = t.dot(xi);
        const double rhs = (1.0 - 1.0 / k) * lin * lin / s;
        bound.record((lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}), tol.operator_concavity_abs, where);

        bool ascending = true;
        for (int i = 0; i + 1 < n; ++i) ascending = ascending && e[i] <= e[i + 1];
        eta_order.require(ascending && (k < 2 || e[n - k + 1] > 0.0), where);

        if (k < n) {
            theta.observe_constant(sum_hessian_deleted(e, k - 1, a, {n - k}) / sum_hessian(e.values(), k - 1, a));
            ellip.observe_constant(t.minCoeff() / t.sum());
        }

        double worst_g = -1.0, worst_t = -1.0, worst_r = -1.0;
        const double scale = std::pow(s, 1.0 / k - 1.0) / k;
        for (int i = 0; i + 1 < n; ++i) {
            worst_g = std::max(worst_g, (g[i + 1] - g[i]) / std::max({1.0, std::abs(g[i]), std::abs(g[i + 1])}));
            worst_t = std::max(worst_t, (t[i] - t[i + 1]) / std::max({1.0, std::abs(t[i]), std::abs(t[i + 1])}));
            const double ri = scale * t[i], rj = scale * t[i + 1];
            worst_r = std::max(worst_r, (ri - rj) / std::max({1.0, std::abs(ri), std::abs(rj)}));
        }
        eta_partials.record(worst_g, tol.ordering_rel, where);
        lam_partials.record(worst_t, tol.ordering_rel, where);
        root_order.record(worst_r, tol.ordering_rel, where);

        trace.observe_constant(t.sum() / std::pow(s, 1.0 - 1.0 / k));
    }
    theta.require_constant_above(tol.constant_floor);
    ellip.require_constant_above(tol.constant_floor);
    trace.require_constant_above(tol.constant_floor);
    out.push_back(bound.result());
    out.push_back(eta_order.result());
    out.push_back(k < n ? theta.result() : theta.skip());
    out.push_back(eta_partials.result());
    out.push_back(lam_partials.result());
    out.push_back(k < n ? ellip.result() : ellip.skip());
    out.push_back(trace.result());
    out.push_back(root_order.result());
    return out;
}

std::vector<CheckResult> derivative_suite(const SumHessianParams& params, const SuiteOptions& options) {
    const int n = params.n;
    const SuiteTolerances& tol = options.tol;
    std::vector<CheckResult> out;

    {
        Check c("derivatives", "gradient_vs_differences");
        std::mt19937_64 rng(mix(options.seed, params, 21));
        const double h = tol.ds_step;
        for (int i = 0; i < options.count; ++i) {
            const EigenTuple lambda = uniform_tuple(rng, n, -2.0, 2.0);
            const Vector g = sum_hessian_gradient(lambda, params);
            const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
            double worst = 0.0;
            for (int p = 0; p < n; ++p) {
                Vector plus = lambda.vector(), minus = lambda.vector();
                plus[p] += h;
                minus[p] -= h;
                const double fd =
                    (sum_hessian(EigenTuple(plus), params) - sum_hessian(EigenTuple(minus), params)) / (2.0 * h);
                worst = std::max(worst, std::abs(fd - g[p]) / scale);
            }
            c.record(worst, tol.ds_rel, [&] { return describe(lambda); });
        }
        out.push_back(c.result());
    }

    {
        Check c("derivatives", "hessian_vs_differences");
        std::mt19937_64 rng(mix(options.seed, params, 22));
        const double h = tol.d2s_step;
        for (int i = 0; i < options.count; ++i) {
            const EigenTuple lambda = uniform_tuple(rng, n, -2.0, 2.0);
            const Matrix hs = sum_hessian_hessian(lambda, params);
            const double scale = std::max(1.0, hs.cwiseAbs().maxCoeff());
            auto s_at = [&](int p, double dp, int q, double dq) {
                Vector x = lambda.vector();
                x[p] += dp;
                x[q] += dq;
                return sum_hessian(EigenTuple(x), params);
            };
            double worst = 0.0;
            for (int p = 0; p < n; ++p) {
                for (int q = p; q < n; ++q) {
                    double fd = 0.0;
                    if (p == q) {
                        fd = (s_at(p, h, p, 0) - 2.0 * sum_hessian(lambda, params) + s_at(p, -h, p, 0)) / (h * h);
                    } else {
                        fd = (s_at(p, h, q, h) - s_at(p, h, q, -h) - s_at(p, -h, q, h) + s_at(p, -h, q, -h)) /
                             (4.0 * h * h);
                    }
                    worst = std::max(worst, std::abs(fd - hs(p, q)) / scale);
                }
            }
            c.record(worst, tol.d2s_rel, [&] { return describe(lambda); });
        }
        out.push_back(c.result());
    }

    // Matrices with simple spectra, plus every fourth one with repeated
    // eigenvalues (the first is the identity).
    auto test_matrix = [&](std::mt19937_64& rng, int i) {
        if (i == 0) return SymMatrix::identity(n);
        std::vector<double> v = uniform_values(rng, n, -1.0, 1.0);
        if (i % 4 == 0) {
            v[1] = v[0];
            if (n >= 4) v[3] = v[2];
        }
        return rotated_diagonal(EigenTuple(std::span<const double>(v)), random_orthogonal(rng, n));
    };

    {
        Check c("derivatives", "operator_gradient_vs_differences");
        std::mt19937_64 rng(mix(options.seed, params, 23));
        const double h = tol.df_step;
        for (int i = 0; i < options.count; ++i) {
            const SymMatrix m = test_matrix(rng, i);
            const SymMatrix g = operator_gradient(m, params);
            const double scale = std::max(1.0, g.matrix().cwiseAbs().maxCoeff());
            double worst = 0.0;
            for (int p = 0; p < n; ++p) {
                for (int q = p; q < n; ++q) {
                    SmallMatrix plus = m.matrix(), minus = m.matrix();
                    plus(p, q) += h;
                    minus(p, q) -= h;
                    if (p != q) {
                        plus(q, p) += h;
                        minus(q, p) -= h;
                    }
                    const double fd =
                        (operator_value(SymMatrix(plus), params) - operator_value(SymMatrix(minus), params)) / (2.0 * h);
                    const double exact = p == q ? g(p, p) : 2.0 * g(p, q);
                    worst = std::max(worst, std::abs(fd - exact) / scale);
                }
            }
            c.record(worst, tol.df_rel, [&] { return describe(m); });
        }
        out.push_back(c.result());
    }

    {
        Check c("derivatives", "operator_second_derivative_vs_differences");
        std::mt19937_64 rng(mix(options.seed, params, 24));
        const double h = tol.d2f_step;
        for (int i = 0; i < options.count; ++i) {
            const SymMatrix m = test_matrix(rng, i);
            const SymMatrix dir = random_symmetric(rng, n);
            const double exact = operator_second_derivative(m, dir, params);
            // F along a line is a polynomial of degree <= k <= 8, which this stencil differentiates exactly
            static constexpr std::array<double, 5> w{-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
            double fd = w[0] * operator_value(m, params);
            for (int j = 1; j <= 4; ++j) {
                fd += w[j] * (operator_value(SymMatrix(m.matrix() + (j * h) * dir.matrix()), params) +
                              operator_value(SymMatrix(m.matrix() - (j * h) * dir.matrix()), params));
            }
            fd /= h * h;
            c.record(std::abs(fd - exact), tol.d2f_abs, [&] { return describe(m) + " along " + describe(dir); });
        }
        out.push_back(c.result());
    }

    {
        Check c("derivatives", "frame_invariance");
        std::mt19937_64 rng(mix(options.seed, params, 25));
        for (int i = 0; i < options.count; ++i) {
            const SymMatrix m = test_matrix(rng, i);
            const SmallMatrix q = random_orthogonal(rng, n);
            const double f = operator_value(m, params);
            const double fr = operator_value(SymMatrix::symmetrized(q.transpose() * m.matrix() * q), params);
            c.record(std::abs(fr - f) / std::max(1.0, std::abs(f)), tol.frame_rel, [&] { return describe(m); });
        }
        out.push_back(c.result());
    }
    return out;
}

std::string format_check(const CheckResult& check, const SumHessianParams& params) {
    std::string s = check.skipped ? "SKIP " : check.passed() ? "PASS " : "FAIL ";
    s += check.suite + "/" + check.name + " n=" + std::to_string(params.n) + " k=" + std::to_string(params.k) +
         " alpha=" + format_double(params.alpha);
    if (check.skipped) return s + " (not applicable)";
    s += " cases=" + std::to_string(check.cases) + " worst=" + format_double(check.worst);
    if (check.constant) s += " constant=" + format_double(*check.constant);
    if (!check.passed()) s += " failures=" + std::to_string(check.failures) + " first=" + check.first_failure;
    return s;
}

} // namespace sumhess
