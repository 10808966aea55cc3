#include "sumhess/grid.hpp"

#include "sumhess/errors.hpp"
#include "sumhess/format.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace sumhess {

GridDomain::GridDomain(int dim, Point lower, Point upper, std::array<int, 3> cells,
                       std::optional<BallMask> mask)
    : dim_(dim), lower_(lower), upper_(upper), cells_(cells), mask_(mask) {
    if (dim != 2 && dim != 3) throw ArgumentError("GridDomain: dim must be 2 or 3");
    for (int a = 0; a < 3; ++a) {
        if (a >= dim) {
            lower_[a] = upper_[a] = 0.0;
            cells_[a] = 0;
            h_[a] = 0.0;
            continue;
        }
        if (cells_[a] < 8) throw ArgumentError("GridDomain: at least 8 cells per axis required");
        if (!(upper_[a] > lower_[a])) throw ArgumentError("GridDomain: upper corner must exceed lower");
        h_[a] = (upper_[a] - lower_[a]) / cells_[a];
    }
    if (mask_ && !(mask_->radius > 0.0)) throw ArgumentError("GridDomain: mask radius must be > 0");

    size_ = static_cast<std::size_t>(points(0)) * points(1) * points(2);
    interior_flag_.assign(size_, 0);
    for (std::size_t idx = 0; idx < size_; ++idx) {
        if (on_frame(idx)) continue;
        if (mask_) {
            const Point x = coordinates(idx);
            double r2 = 0.0;
            for (int a = 0; a < dim_; ++a) r2 += (x[a] - mask_->center[a]) * (x[a] - mask_->center[a]);
            if (!(r2 < mask_->radius * mask_->radius)) continue;
        }
        interior_flag_[idx] = 1;
        interior_.push_back(idx);
    }
    if (interior_.empty()) throw ArgumentError("GridDomain: no interior points");
}

GridDomain GridDomain::centered_box(int dim, double half_width, int cells, std::optional<BallMask> mask) {
    return GridDomain(dim, {-half_width, -half_width, -half_width},
                      {half_width, half_width, half_width}, {cells, cells, cells}, mask);
}

double GridDomain::max_spacing() const noexcept {
    double h = 0.0;
    for (int a = 0; a < dim_; ++a) h = std::max(h, h_[a]);
    return h;
}

std::array<int, 3> GridDomain::unravel(std::size_t idx) const noexcept {
    std::array<int, 3> ijk{};
    ijk[2] = static_cast<int>(idx % points(2));
    idx /= points(2);
    ijk[1] = static_cast<int>(idx % points(1));
    ijk[0] = static_cast<int>(idx / points(1));
    return ijk;
}

Point GridDomain::coordinates(std::size_t idx) const noexcept {
    const auto ijk = unravel(idx);
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) x[a] = lower_[a] + ijk[a] * h_[a];
    return x;
}

bool GridDomain::on_frame(std::size_t idx) const noexcept {
    const auto ijk = unravel(idx);
    for (int a = 0; a < dim_; ++a) {
        if (ijk[a] == 0 || ijk[a] == cells_[a]) return true;
    }
    return false;
}

Point GridDomain::center() const noexcept {
    if (mask_) return mask_->center;
    Point c{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) c[a] = 0.5 * (lower_[a] + upper_[a]);
    return c;
}

double GridDomain::inscribed_radius() const noexcept {
    if (mask_) return mask_->radius;
    double r = std::numeric_limits<double>::infinity();
    for (int a = 0; a < dim_; ++a) r = std::min(r, 0.5 * (upper_[a] - lower_[a]));
    return r;
}

std::size_t GridDomain::nearest_point(const Point& x) const {
    std::array<int, 3> ijk{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
        const long i = std::lround((x[a] - lower_[a]) / h_[a]);
        ijk[a] = static_cast<int>(std::clamp<long>(i, 0, cells_[a]));
    }
    return index(ijk);
}

SymMatrix discrete_hessian(const GridDomain& grid, std::span<const double> u, std::size_t idx) {
    const int d = grid.dim();
    const auto ijk = grid.unravel(idx);
    auto at = [&](int a, int sa, int b, int sb) {
        auto p = ijk;
        p[a] += sa;
        p[b] += sb;
        return u[grid.index(p)];
    };
    SmallMatrix h(d, d);
    const double uc = u[idx];
    for (int a = 0; a < d; ++a) {
        const double ha = grid.spacing(a);
        h(a, a) = (at(a, 1, a, 0) - 2.0 * uc + at(a, -1, a, 0)) / (ha * ha);
        for (int b = a + 1; b < d; ++b) {
            const double v = (at(a, 1, b, 1) - at(a, 1, b, -1) - at(a, -1, b, 1) + at(a, -1, b, -1)) /
                             (4.0 * ha * grid.spacing(b));
            h(a, b) = v;
            h(b, a) = v;
        }
    }
    return SymMatrix(h);
}

SymMatrix discrete_hessian(const ScalarField& field, std::size_t idx) {
    return discrete_hessian(*field.grid, field.values, idx);
}

Point discrete_gradient(const GridDomain& grid, std::span<const double> u, std::size_t idx) {
    const auto ijk = grid.unravel(idx);
    Point g{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) {
        auto plus = ijk;
        auto minus = ijk;
        ++plus[a];
        --minus[a];
        g[a] = (u[grid.index(plus)] - u[grid.index(minus)]) / (2.0 * grid.spacing(a));
    }
    return g;
}

void write_field(std::ostream& out, const ScalarField& field) {
    const GridDomain& g = *field.grid;
    const double h = g.spacing(0);
    for (int a = 1; a < g.dim(); ++a) {
        if (std::abs(g.spacing(a) - h) > 1e-12 * h) {
            throw ArgumentError("write_field: the field format requires equal spacing on every axis");
        }
    }
    out << g.dim();
    for (int a = 0; a < g.dim(); ++a) out << ' ' << g.points(a);
    for (int a = 0; a < g.dim(); ++a) out << ' ' << format_double(g.lower()[a]);
    out << ' ' << format_double(h) << '\n';
    for (double v : field.values) out << format_double(v) << '\n';
}

ScalarField read_field(std::istream& in, std::optional<BallMask> mask) {
    int dim = 0;
    if (!(in >> dim) || (dim != 2 && dim != 3)) throw ArgumentError("read_field: bad dimension in header");
    std::array<int, 3> cells{0, 0, 0};
    Point lower{0.0, 0.0, 0.0};
    Point upper{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
        int pts = 0;
        if (!(in >> pts) || pts < 9) throw ArgumentError("read_field: bad point count in header");
        cells[a] = pts - 1;
    }
    for (int a = 0; a < dim; ++a) {
        if (!(in >> lower[a])) throw ArgumentError("read_field: bad corner in header");
    }
    double h = 0.0;
    if (!(in >> h) || !(h > 0.0)) throw ArgumentError("read_field: bad spacing in header");
    for (int a = 0; a < dim; ++a) upper[a] = lower[a] + cells[a] * h;

    auto grid = std::make_shared<const GridDomain>(dim, lower, upper, cells, mask);
    ScalarField field(grid);
    for (double& v : field.values) {
        if (!(in >> v)) throw ArgumentError("read_field: truncated value list");
    }
    return field;
}

} // namespace sumhess
