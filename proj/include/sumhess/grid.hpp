#pragma once

// Uniform box grids in 2D/3D, optional ball mask, grid functions and the
// centered difference stencils shared by the solver and the estimates.

#include "sumhess/spectral.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace sumhess {

using Point = std::array<double, 3>;

/// Interior = strictly inside the ball. Grid points outside carry Dirichlet data.
struct BallMask {
    Point center{0.0, 0.0, 0.0};
    double radius = 1.0;
};

class GridDomain {
public:
    /// cells[a] >= 8 for every used axis; lower < upper. Unused axes are ignored.
    GridDomain(int dim, Point lower, Point upper, std::array<int, 3> cells,
               std::optional<BallMask> mask = std::nullopt);

    /// Cube [-half_width, half_width]^dim with the given number of cells per axis.
    static GridDomain centered_box(int dim, double half_width, int cells,
                                   std::optional<BallMask> mask = std::nullopt);

    int dim() const noexcept { return dim_; }
    int points(int axis) const noexcept { return axis < dim_ ? cells_[axis] + 1 : 1; }
    int cells(int axis) const noexcept { return cells_[axis]; }
    double spacing(int axis) const noexcept { return h_[axis]; }
    /// Largest spacing over the used axes.
    double max_spacing() const noexcept;
    const Point& lower() const noexcept { return lower_; }
    const Point& upper() const noexcept { return upper_; }
    const std::optional<BallMask>& mask() const noexcept { return mask_; }

    std::size_t size() const noexcept { return size_; }
    /// Linear index; the last used axis varies fastest.
    std::size_t index(std::array<int, 3> ijk) const noexcept {
        return (static_cast<std::size_t>(ijk[0]) * points(1) + ijk[1]) * points(2) + ijk[2];
    }
    std::array<int, 3> unravel(std::size_t idx) const noexcept;
    Point coordinates(std::size_t idx) const noexcept;

    /// True on the outermost layer of the box, where no centered stencil exists.
    bool on_frame(std::size_t idx) const noexcept;
    bool is_interior(std::size_t idx) const noexcept { return interior_flag_[idx] != 0; }
    const std::vector<std::size_t>& interior_points() const noexcept { return interior_; }

    /// Box center, or the ball center when masked.
    Point center() const noexcept;
    /// Ball radius when masked, otherwise the half-width of the narrowest axis.
    double inscribed_radius() const noexcept;
    std::size_t nearest_point(const Point& x) const;

private:
    int dim_;
    Point lower_;
    Point upper_;
    std::array<int, 3> cells_;
    Point h_{};
    std::optional<BallMask> mask_;
    std::size_t size_ = 0;
    std::vector<char> interior_flag_;
    std::vector<std::size_t> interior_;
};

/// Values of u at every grid point; boundary entries hold Dirichlet data.
struct ScalarField {
    std::shared_ptr<const GridDomain> grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(std::shared_ptr<const GridDomain> g)
        : grid(std::move(g)), values(grid->size(), 0.0) {}
};

/// Second-order centered Hessian at a point off the frame: three-point second
/// differences on the diagonal, the four-point cross stencil off it.
SymMatrix discrete_hessian(const ScalarField& field, std::size_t idx);
SymMatrix discrete_hessian(const GridDomain& grid, std::span<const double> u, std::size_t idx);

/// Centered first differences (unused axes are 0).
Point discrete_gradient(const GridDomain& grid, std::span<const double> u, std::size_t idx);
inline Point discrete_gradient(const ScalarField& field, std::size_t idx) {
    return discrete_gradient(*field.grid, field.values, idx);
}

/// Plain-text grid format: header `dim nx [ny [nz]] x0 [y0 [z0]] h` (point
/// counts per axis, lower corner, common spacing) followed by one value per
/// line in index() order. Values are written with 17 significant digits.
void write_field(std::ostream& out, const ScalarField& field);
/// Reads the format above; an optional ball mask re-marks exterior points as boundary.
ScalarField read_field(std::istream& in, std::optional<BallMask> mask = std::nullopt);

} // namespace sumhess
