#pragma once

// Run configuration files.
//
//   # comment
//   [problem]
//   n = 3
//   k = 2
//   alpha = 1
//   rhs = "18"
//   boundary = "(x1^2 + x2^2 + x3^2 - 1) / 2"
//
//   [domain]
//   lower = -1, -1, -1
//   upper = 1, 1, 1
//   cells = 32
//   mask = ball            # or none
//
// Sections: run, problem, domain, solver, estimates. Unknown sections or
// keys are errors.

#include "sumhess/estimates.hpp"
#include "sumhess/expression.hpp"
#include "sumhess/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sumhess {

struct DomainConfig {
    Point lower{-1.0, -1.0, -1.0};
    Point upper{1.0, 1.0, 1.0};
    std::array<int, 3> cells{32, 32, 32};
    bool ball_mask = false;
    Point mask_center{0.0, 0.0, 0.0};
    double mask_radius = 1.0;
};

struct RunConfig {
    std::string id = "instance";
    std::uint64_t seed = 0;
    SumHessianParams params;
    std::string rhs_source;
    std::string boundary_source = "0";
    Expression rhs;
    Expression boundary;
    bool require_positive = true;
    DomainConfig domain;
    SolverConfig solver;
    std::vector<double> betas{1.0, 2.0, 4.0, 8.0};
    PParams p_params;
    std::string field_out;
    std::string trace_out;
    std::string report_out;
};

/// Throws ConfigError naming the origin and line of the first problem.
RunConfig parse_config(std::istream& in, const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

std::shared_ptr<const GridDomain> make_domain(const RunConfig& config);

/// f from an expression; dependency flags follow the identifiers it uses.
RhsSpec rhs_from_expression(const Expression& expr, bool require_positive = true);
BoundaryFunction boundary_from_expression(const Expression& expr);

SumHessianSpec make_spec(const RunConfig& config);

/// Comma-separated reals, e.g. "1, 2, 4". Throws ConfigError.
std::vector<double> parse_real_list(const std::string& text);

} // namespace sumhess
