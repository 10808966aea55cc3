#include "sumhess/cones.hpp"

#include "sumhess/errors.hpp"
#include "sumhess/format.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <string>

namespace sumhess {

std::string_view to_string(ConeId id) {
    switch (id) {
    case ConeId::GammaK: return "GAMMA_K";
    case ConeId::GammaTildeK: return "GAMMA_TILDE_K";
    case ConeId::GammaPrimeK: return "GAMMA_PRIME_K";
    case ConeId::GammaTildePrimeK: return "GAMMA_TILDE_PRIME_K";
    }
    return "?";
}

ConeId cone_from_string(std::string_view name) {
    for (ConeId id : {ConeId::GammaK, ConeId::GammaTildeK, ConeId::GammaPrimeK,
                      ConeId::GammaTildePrimeK}) {
        if (to_string(id) == name) return id;
    }
    throw ArgumentError("unknown cone id '" + std::string(name) + "'");
}

EigenTuple eta(const EigenTuple& lambda) {
    const double s1 = lambda.vector().sum();
    EigenTuple out = lambda;
    for (int i = 0; i < out.size(); ++i) out[i] = s1 - lambda[i];
    return out;
}

bool in_gamma(const EigenTuple& lambda, int m) {
    if (m < 1 || m > lambda.size()) {
        throw ArgumentError("in_gamma: m must satisfy 1 <= m <= n");
    }
    // One product expansion yields every sigma_j, j <= m.
    double e[kMaxDim + 1] = {1.0};
    const int n = lambda.size();
    for (int i = 0; i < n; ++i) {
        for (int j = std::min(i + 1, m); j >= 1; --j) e[j] += lambda[i] * e[j - 1];
    }
    for (int j = 1; j <= m; ++j) {
        if (!(e[j] > 0.0)) return false;
    }
    return true;
}

bool in_gamma_tilde(const EigenTuple& lambda, const SumHessianParams& params) {
    if (params.k > 1 && !in_gamma(lambda, params.k - 1)) return false;
    return sum_hessian(lambda, params) > 0.0;
}

bool in_gamma_prime(const EigenTuple& lambda, const SumHessianParams& params, PrimeVariant variant) {
    const EigenTuple e = eta(lambda);
    return variant == PrimeVariant::AdmissibleK ? in_gamma(e, params.k) : in_gamma_tilde(e, params);
}

bool in_cone(const EigenTuple& lambda, ConeId cone, const SumHessianParams& params) {
    switch (cone) {
    case ConeId::GammaK: return in_gamma(lambda, params.k);
    case ConeId::GammaTildeK: return in_gamma_tilde(lambda, params);
    case ConeId::GammaPrimeK: return in_gamma_prime(lambda, params, PrimeVariant::AdmissibleK);
    case ConeId::GammaTildePrimeK: return in_gamma_prime(lambda, params, PrimeVariant::TildeK);
    }
    return false;
}

ConeSampleBatch sample_cone(ConeId cone, const SumHessianParams& params, int count,
                            std::uint64_t seed, const SamplerLimits& limits) {
    if (count < 1) throw ArgumentError("sample_cone: count must be >= 1");

    ConeSampleBatch batch;
    batch.cone_id = cone;
    batch.params = params;
    batch.seed = seed;
    batch.samples.reserve(static_cast<std::size_t>(count));

    Vector ones = Vector::Ones(params.n);
    batch.samples.emplace_back(ones);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(limits.box_lower, limits.box_upper);
    std::uint64_t draws = 0;
    std::uint64_t accepted = 0;
    Vector candidate(params.n);
    while (static_cast<int>(batch.samples.size()) < count) {
        for (int i = 0; i < params.n; ++i) candidate[i] = box(rng);
        ++draws;
        EigenTuple lambda(candidate);
        if (in_cone(lambda, cone, params)) {
            ++accepted;
            batch.samples.push_back(lambda);
        }
        if (draws >= limits.draw_budget &&
            static_cast<double>(accepted) < limits.min_acceptance * static_cast<double>(draws)) {
            throw SamplingExhausted("sample_cone: acceptance " + std::to_string(accepted) + "/" +
                                    std::to_string(draws) + " for " + std::string(to_string(cone)) +
                                    " with n=" + std::to_string(params.n) +
                                    " k=" + std::to_string(params.k));
        }
    }
    return batch;
}

void write_csv(std::ostream& out, const ConeSampleBatch& batch) {
    const int n = batch.params.n;
    for (int i = 1; i <= n; ++i) out << "lambda" << i << ',';
    out << "cone_id,n,k,alpha\n";
    for (const EigenTuple& s : batch.samples) {
        for (int i = 0; i < n; ++i) out << format_double(s[i]) << ',';
        out << to_string(batch.cone_id) << ',' << n << ',' << batch.params.k << ','
            << format_double(batch.params.alpha) << '\n';
    }
}

} // namespace sumhess
