#include "sumhess/estimates.hpp"

#include "sumhess/errors.hpp"
#include "sumhess/format.hpp"
#include "sumhess/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace sumhess {

namespace {

double norm_sq(const Point& p) { return p[0] * p[0] + p[1] * p[1] + p[2] * p[2]; }

double distance_sq(const GridDomain& grid, std::size_t idx) {
    const Point x = grid.coordinates(idx);
    const Point c = grid.center();
    double s = 0.0;
    for (int a = 0; a < grid.dim(); ++a) s += (x[a] - c[a]) * (x[a] - c[a]);
    return s;
}

void require_zero_boundary(const ScalarField& field, const char* who) {
    if (!zero_boundary(field)) {
        throw ArgumentError(std::string(who) + ": boundary data must be identically zero");
    }
}

// Boundary points touched by the Hessian stencil of some interior point.
bool in_stencil_closure(const GridDomain& grid, std::size_t idx) {
    const auto ijk = grid.unravel(idx);
    const int dz = grid.dim() == 3 ? 1 : 0;
    for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) {
            for (int c = -dz; c <= dz; ++c) {
                const std::array<int, 3> q{ijk[0] + a, ijk[1] + b, ijk[2] + c};
                bool inside = true;
                for (int ax = 0; ax < grid.dim(); ++ax) inside = inside && q[ax] >= 0 && q[ax] < grid.points(ax);
                if (inside && grid.is_interior(grid.index(q))) return true;
            }
        }
    }
    return false;
}

// Centered where possible, second-order one-sided along axes where idx sits on the frame.
Point closure_gradient(const GridDomain& grid, std::span<const double> u, std::size_t idx) {
    const auto ijk = grid.unravel(idx);
    Point g{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) {
        auto at = [&](int offset) {
            auto q = ijk;
            q[a] += offset;
            return u[grid.index(q)];
        };
        const double h = grid.spacing(a);
        if (ijk[a] == 0) g[a] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        else if (ijk[a] == grid.points(a) - 1) g[a] = (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h);
        else g[a] = (at(1) - at(-1)) / (2.0 * h);
    }
    return g;
}

std::string location(const Point& x, int dim) {
    std::string s;
    for (int a = 0; a < dim; ++a) s += (a ? " " : "") + format_double(x[a]);
    return s;
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

void fold_max(std::optional<double>& acc, const std::optional<double>& v) {
    if (v) acc = acc ? std::max(*acc, *v) : *v;
}

std::string beta_label(double beta) {
    std::string s = format_double(beta);
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

} // namespace

FieldDerivatives field_derivatives(const ScalarField& field) {
    const GridDomain& grid = *field.grid;
    FieldDerivatives d;
    d.top_eigenvalue.assign(grid.size(), 0.0);
    d.spectral_norm.assign(grid.size(), 0.0);
    d.gradient.assign(grid.size(), Point{0.0, 0.0, 0.0});
    for (std::size_t idx : grid.interior_points()) {
        const EigenTuple ev = eigen_sym(discrete_hessian(field, idx)).values;
        d.top_eigenvalue[idx] = ev[0];
        d.spectral_norm[idx] = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
        d.gradient[idx] = discrete_gradient(field, idx);
        d.sup_grad_sq = std::max(d.sup_grad_sq, norm_sq(d.gradient[idx]));
        d.sup_hess = std::max(d.sup_hess, d.spectral_norm[idx]);
    }
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        if (grid.is_interior(idx) || !in_stencil_closure(grid, idx)) continue;
        d.sup_grad_sq = std::max(d.sup_grad_sq, norm_sq(closure_gradient(grid, field.values, idx)));
    }
    d.sup_grad = std::sqrt(d.sup_grad_sq);
    return d;
}

bool zero_boundary(const ScalarField& field) {
    const GridDomain& grid = *field.grid;
    for (std::size_t idx = 0; idx < grid.size(); ++idx)
        if (!grid.is_interior(idx) && field.values[idx] != 0.0) return false;
    return true;
}

double interior_ratio(const ScalarField& field, double radius) {
    return interior_ratio(field, field_derivatives(field), radius);
}

double interior_ratio(const ScalarField& field, const FieldDerivatives& d, double radius) {
    if (!(radius > 0.0)) throw ArgumentError("interior_ratio: radius must be positive");
    const GridDomain& grid = *field.grid;
    const std::size_t c = grid.nearest_point(grid.center());
    if (!grid.is_interior(c)) throw ArgumentError("interior_ratio: domain center is not an interior point");
    return d.spectral_norm[c] / (1.0 + d.sup_grad / radius);
}

double pogorelov_product(const ScalarField& field, double beta) {
    return pogorelov_product(field, field_derivatives(field), beta);
}

double pogorelov_product(const ScalarField& field, const FieldDerivatives& d, double beta) {
    if (!(beta >= 1.0)) throw ArgumentError("pogorelov_product: beta must be >= 1");
    require_zero_boundary(field, "pogorelov_product");
    double best = 0.0;
    for (std::size_t idx : field.grid->interior_points()) {
        const double u = field.values[idx];
        if (u > 0.0) {
            throw DomainError("pogorelov_product: u > 0 at an interior point violates the maximum principle");
        }
        best = std::max(best, std::pow(-u, beta) * d.spectral_norm[idx]);
    }
    return best;
}

DiagnosticField phi_diagnostic(const ScalarField& field) { return phi_diagnostic(field, field_derivatives(field)); }

DiagnosticField phi_diagnostic(const ScalarField& field, const FieldDerivatives& d) {
    const GridDomain& grid = *field.grid;
    const double r2 = grid.inscribed_radius() * grid.inscribed_radius();
    const double a = d.sup_grad_sq;
    DiagnosticField out;
    out.values.assign(grid.size(), 0.0);
    bool first = true;
    for (std::size_t idx : grid.interior_points()) {
        const double rho = 1.0 - distance_sq(grid, idx) / r2;
        const double g = a > 0.0 ? std::pow(1.0 - 0.5 * norm_sq(d.gradient[idx]) / a, -1.0 / 3.0) : 1.0;
        const double phi = rho * g * d.top_eigenvalue[idx];
        out.values[idx] = phi;
        if (first || phi > out.max) {
            out.max = phi;
            out.argmax = idx;
            first = false;
        }
    }
    return out;
}

DiagnosticField p_diagnostic(const ScalarField& field, const PParams& params) {
    return p_diagnostic(field, field_derivatives(field), params);
}

DiagnosticField p_diagnostic(const ScalarField& field, const FieldDerivatives& d, const PParams& params) {
    require_zero_boundary(field, "p_diagnostic");
    const GridDomain& grid = *field.grid;
    DiagnosticField out;
    out.values.assign(grid.size(), std::nullopt);
    bool first = true;
    for (std::size_t idx : grid.interior_points()) {
        const double u = field.values[idx];
        const double top = d.top_eigenvalue[idx];
        if (!(u < 0.0) || !(top > 0.0)) {
            ++out.excluded;
            continue;
        }
        const double p = params.beta * std::log(-u) + std::log(top) +
                         0.5 * params.a * norm_sq(d.gradient[idx]) +
                         0.5 * params.a_const * distance_sq(grid, idx);
        out.values[idx] = p;
        if (first || p > out.max) {
            out.max = p;
            out.argmax = idx;
            first = false;
        }
    }
    if (first) throw DomainError("p_diagnostic: every interior point is excluded (u >= 0 or u_tt <= 0)");
    return out;
}

EstimateReport estimate_report(const std::string& instance_id, const ScalarField& field,
                               const std::vector<double>& betas, const PParams& p_params) {
    const GridDomain& grid = *field.grid;
    const FieldDerivatives d = field_derivatives(field);
    EstimateReport r;
    r.instance_id = instance_id;
    r.dim = grid.dim();
    r.h = grid.max_spacing();
    r.sup_grad = d.sup_grad;
    r.sup_hess = d.sup_hess;
    r.rho_radius = grid.inscribed_radius();
    r.interior_ratio = interior_ratio(field, d, r.rho_radius);
    r.hess_center = d.spectral_norm[grid.nearest_point(grid.center())];
    r.betas = betas;

    const DiagnosticField phi = phi_diagnostic(field, d);
    r.phi_max = phi.max;
    r.phi_argmax = grid.coordinates(phi.argmax);

    if (zero_boundary(field)) {
        r.pogorelov_product = pogorelov_product(field, d, 1.0);
        for (double b : betas) r.weighted_pogorelov.emplace_back(pogorelov_product(field, d, b));
        const DiagnosticField p = p_diagnostic(field, d, p_params);
        r.p_max = p.max;
        r.p_argmax = grid.coordinates(p.argmax);
        r.p_excluded = p.excluded;
    } else {
        r.weighted_pogorelov.assign(betas.size(), std::nullopt);
    }
    return r;
}

double drift(double coarse, double fine) {
    if (coarse == 0.0) return fine == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(fine - coarse) / std::abs(coarse);
}

void mark_stable_betas(std::vector<EstimateReport>& reports, double tolerance) {
    for (auto& fine : reports) {
        const EstimateReport* coarse = nullptr;
        for (const auto& other : reports) {
            if (other.instance_id != fine.instance_id || !(other.h > fine.h)) continue;
            if (!coarse || other.h < coarse->h) coarse = &other;
        }
        fine.stable_beta.reset();
        if (!coarse || coarse->betas != fine.betas) continue;
        for (std::size_t i = 0; i < fine.betas.size(); ++i) {
            const auto& a = coarse->weighted_pogorelov[i];
            const auto& b = fine.weighted_pogorelov[i];
            if (a && b && drift(*a, *b) <= tolerance) {
                if (!fine.stable_beta || fine.betas[i] < *fine.stable_beta) fine.stable_beta = fine.betas[i];
            }
        }
    }
}

void write_family_report(std::ostream& out, const std::vector<EstimateReport>& reports) {
    const std::vector<double> betas = reports.empty() ? std::vector<double>{} : reports.front().betas;
    for (const auto& r : reports) {
        if (r.betas != betas) throw ArgumentError("write_family_report: every report needs the same beta sweep");
    }
    out << "instance_id,h,sup_grad,sup_hess,hess_center,interior_ratio,pogorelov_product";
    for (double b : betas) out << ",weighted_pogorelov_b" << beta_label(b);
    out << ",phi_max,phi_argmax,P_max,P_argmax,P_excluded,rho_radius,stable_beta\n";

    std::optional<double> h, grad, hess, centre, ratio, pogo, phi, pmax, rho;
    std::vector<std::optional<double>> weighted(betas.size());
    for (const auto& r : reports) {
        out << r.instance_id << ',' << format_double(r.h) << ',' << format_double(r.sup_grad) << ','
            << format_double(r.sup_hess) << ',' << format_double(r.hess_center) << ','
            << format_double(r.interior_ratio) << ',' << cell(r.pogorelov_product);
        for (const auto& w : r.weighted_pogorelov) out << ',' << cell(w);
        out << ',' << format_double(r.phi_max) << ',' << location(r.phi_argmax, r.dim) << ','
            << cell(r.p_max) << ',' << (r.p_argmax ? location(*r.p_argmax, r.dim) : "NA") << ','
            << r.p_excluded << ',' << format_double(r.rho_radius) << ',' << cell(r.stable_beta) << '\n';

        fold_max(h, r.h);
        fold_max(grad, r.sup_grad);
        fold_max(hess, r.sup_hess);
        fold_max(centre, r.hess_center);
        fold_max(ratio, r.interior_ratio);
        fold_max(pogo, r.pogorelov_product);
        for (std::size_t i = 0; i < betas.size(); ++i) fold_max(weighted[i], r.weighted_pogorelov[i]);
        fold_max(phi, r.phi_max);
        fold_max(pmax, r.p_max);
        fold_max(rho, r.rho_radius);
    }
    out << "family_max," << cell(h) << ',' << cell(grad) << ',' << cell(hess) << ',' << cell(centre) << ','
        << cell(ratio) << ',' << cell(pogo);
    for (const auto& w : weighted) out << ',' << cell(w);
    out << ',' << cell(phi) << ",NA," << cell(pmax) << ",NA,NA," << cell(rho) << ",NA\n";
}

} // namespace sumhess
