#pragma once

// Randomized property suites over the symmetric-function, cone and spectral
// layers. Each check reports its case count, the worst observed error (or
// the empirical constant) and the first failing input.

#include "sumhess/symfun.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sumhess {

struct SuiteTolerances {
    double identity_rel = 1e-10;      // exact identities, relative to the |lambda| magnitude
    double newton_rel = 1e-12;        // S_k^2 - S_{k-1} S_{k+1} >= -tol max(1, S_k^2)
    double gradient_sum_abs = 1e-10;  // sum d sigma_k^{1/k} >= C(n,k)^{1/k} - tol
    double ordering_rel = 1e-12;      // monotone chains and orderings
    double concavity_abs = 1e-9;      // quadratic-form bounds, scaled by max(1, |terms|)
    double operator_concavity_abs = 1e-8;
    double constant_floor = 1e-8;     // empirical ratio constants must exceed this
    double frame_rel = 1e-10;
    double ds_rel = 1e-6;
    double d2s_rel = 1e-5;
    double df_rel = 1e-6;
    double d2f_abs = 1e-4;
    double ds_step = 1e-6;
    double d2s_step = 1e-4;
    double df_step = 1e-5;
    double d2f_step = 0.1;         // nine-point stencil, exact on the polynomial operator
};

struct SuiteOptions {
    int count = 1000;
    std::uint64_t seed = 7;
    SuiteTolerances tol;
};

struct CheckResult {
    std::string suite;
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst = 0.0;                 // largest normalized violation seen
    std::optional<double> constant;     // empirical constant, where the check estimates one
    std::string first_failure;
    bool skipped = false;               // not applicable to these parameters
    bool passed() const noexcept { return failures == 0; }
};

/// Exact algebraic identities on lambda uniform in [-2, 2]^n.
std::vector<CheckResult> identity_suite(const SumHessianParams& params, const SuiteOptions& options);

/// Inequalities and orderings on cone samples (n <= 8).
std::vector<CheckResult> inequality_suite(const SumHessianParams& params, const SuiteOptions& options);

/// Analytic derivatives against finite differences (n <= 8).
std::vector<CheckResult> derivative_suite(const SumHessianParams& params, const SuiteOptions& options);

/// "PASS suite/name n=.. k=.. alpha=.. cases=.. worst=.. [constant=..]".
std::string format_check(const CheckResult& check, const SumHessianParams& params);

} // namespace sumhess
