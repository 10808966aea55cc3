#pragma once

// Membership in the open cones
//
//   Gamma_m        = { sigma_1, ..., sigma_m > 0 }
//   GammaTilde_k   = Gamma_{k-1} and S_k > 0
//   Gamma'_k       = { lambda : eta(lambda) in Gamma_k }
//   GammaTilde'_k  = { lambda : eta(lambda) in GammaTilde_k }
//
// with eta_i = sigma_1(lambda) - lambda_i, plus a seeded rejection sampler.
// All inequalities are strict with zero tolerance.

#include "sumhess/symfun.hpp"

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace sumhess {

enum class ConeId { GammaK, GammaTildeK, GammaPrimeK, GammaTildePrimeK };

enum class PrimeVariant { AdmissibleK, TildeK };

std::string_view to_string(ConeId id);
/// Accepts the CSV names (GAMMA_K, ...); throws ArgumentError otherwise.
ConeId cone_from_string(std::string_view name);

/// eta_i = sigma_1(lambda) - lambda_i. Not re-sorted.
EigenTuple eta(const EigenTuple& lambda);

/// sigma_j(lambda) > 0 for j = 1..m. Throws ArgumentError unless 1 <= m <= n.
bool in_gamma(const EigenTuple& lambda, int m);

/// in_gamma(lambda, k-1) and S_k(lambda) > 0; the Gamma_0 condition is vacuous.
bool in_gamma_tilde(const EigenTuple& lambda, const SumHessianParams& params);

/// Applies in_gamma(., k) or in_gamma_tilde to eta(lambda).
bool in_gamma_prime(const EigenTuple& lambda, const SumHessianParams& params, PrimeVariant variant);

/// Dispatch on a cone id.
bool in_cone(const EigenTuple& lambda, ConeId cone, const SumHessianParams& params);

struct ConeSampleBatch {
    std::vector<EigenTuple> samples;
    ConeId cone_id = ConeId::GammaK;
    SumHessianParams params;
    std::uint64_t seed = 0;
};

struct SamplerLimits {
    std::uint64_t draw_budget = 10'000'000;
    double min_acceptance = 1e-4;
    double box_lower = -1.0;
    double box_upper = 3.0;
};

/// Rejection sampling from the box [-1, 3]^n. Sample 0 is always (1, ..., 1).
/// Throws SamplingExhausted when the acceptance rate is below
/// limits.min_acceptance once limits.draw_budget draws have been spent.
ConeSampleBatch sample_cone(ConeId cone, const SumHessianParams& params, int count,
                            std::uint64_t seed, const SamplerLimits& limits = {});

/// One row per sample: lambda_1..lambda_n, cone_id, n, k, alpha. Header row included.
void write_csv(std::ostream& out, const ConeSampleBatch& batch);

} // namespace sumhess
