#pragma once

// A priori estimate quantities evaluated on solved grid fields.
//
// |D^2 u| is the spectral norm of the discrete Hessian and u_tt its largest
// eigenvalue. sup|Du| runs over interior points and the boundary points their
// Hessian stencils touch (one-sided differences on the box frame).

#include "sumhess/grid.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sumhess {

/// Hessian and gradient data of every interior point, computed once.
/// sup_grad also covers the boundary points of the stencil closure.
struct FieldDerivatives {
    std::vector<double> top_eigenvalue;   // lambda_max, by grid index (0 off the interior)
    std::vector<double> spectral_norm;    // max |lambda|
    std::vector<Point> gradient;
    double sup_grad = 0.0;
    double sup_grad_sq = 0.0;
    double sup_hess = 0.0;
};

FieldDerivatives field_derivatives(const ScalarField& field);

/// |D^2 u(x_c)| / (1 + sup|Du| / R), x_c the grid point nearest the domain
/// center. Throws ArgumentError if that point is not interior or R <= 0.
double interior_ratio(const ScalarField& field, double radius);
double interior_ratio(const ScalarField& field, const FieldDerivatives& d, double radius);

/// max over interior points of (-u)^beta |D^2 u|. Requires beta >= 1 and
/// zero boundary data (ArgumentError); u > 0 anywhere is a DomainError.
double pogorelov_product(const ScalarField& field, double beta);
double pogorelov_product(const ScalarField& field, const FieldDerivatives& d, double beta);

/// A pointwise diagnostic with its maximum over interior points.
struct DiagnosticField {
    std::vector<std::optional<double>> values;   // by grid index; empty where undefined
    double max = 0.0;
    std::size_t argmax = 0;
    std::size_t excluded = 0;   // interior points where the quantity is undefined
};

/// phi = rho g(|Du|^2 / 2) u_tt with rho = 1 - |x - x_c|^2 / r^2 (r the
/// inscribed radius), g(t) = (1 - t/A)^(-1/3), A = sup|Du|^2; g = 1 if A = 0.
/// Non-interior points carry 0.
DiagnosticField phi_diagnostic(const ScalarField& field);
DiagnosticField phi_diagnostic(const ScalarField& field, const FieldDerivatives& d);

struct PParams {
    double beta = 2.0;
    double a = 0.1;
    double a_const = 1.0;
};

/// P = beta log(-u) + log u_tt + (a/2)|Du|^2 + (A/2)|x - x_c|^2. Points with
/// u >= 0 or u_tt <= 0 are excluded and counted. Requires zero boundary data;
/// throws DomainError if every interior point is excluded.
DiagnosticField p_diagnostic(const ScalarField& field, const PParams& params);
DiagnosticField p_diagnostic(const ScalarField& field, const FieldDerivatives& d, const PParams& params);

/// True when every non-interior value is exactly zero.
bool zero_boundary(const ScalarField& field);

struct EstimateReport {
    std::string instance_id;
    double h = 0.0;
    double sup_grad = 0.0;
    double sup_hess = 0.0;
    double hess_center = 0.0;
    double interior_ratio = 0.0;
    std::optional<double> pogorelov_product;
    std::vector<double> betas;
    std::vector<std::optional<double>> weighted_pogorelov;   // one per beta
    double phi_max = 0.0;
    Point phi_argmax{0.0, 0.0, 0.0};
    std::optional<double> p_max;
    std::optional<Point> p_argmax;
    std::size_t p_excluded = 0;
    double rho_radius = 0.0;
    int dim = 0;
    /// Smallest beta whose weighted product drifts by at most the stability
    /// tolerance against the next coarser grid of the same instance.
    std::optional<double> stable_beta;
};

EstimateReport estimate_report(const std::string& instance_id, const ScalarField& field,
                               const std::vector<double>& betas, const PParams& p_params = {});

/// Relative change |fine - coarse| / |coarse|.
double drift(double coarse, double fine);

/// Fills stable_beta on every report that has a coarser sibling (same
/// instance_id, larger h), comparing against the nearest coarser one.
void mark_stable_betas(std::vector<EstimateReport>& reports, double tolerance = 0.10);

/// CSV with one row per report and a final `family_max` row holding the
/// column maxima. Absent values print as NA.
void write_family_report(std::ostream& out, const std::vector<EstimateReport>& reports);

} // namespace sumhess
