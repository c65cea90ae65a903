#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace npde {

enum class BoundaryKind { dirichlet, periodic, mirror, extend };

/// Boundary treatment used when padding a field with ghost cells.
///
/// - dirichlet: ghost cells hold `value`
/// - periodic:  wrap around the opposite edge
/// - mirror:    reflect about the edge cell, the edge itself is not repeated
/// - extend:    replicate the edge cell
struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::periodic;
    double value = 0.0;

    static BoundaryCondition dirichlet(double v) { return {BoundaryKind::dirichlet, v}; }
    static BoundaryCondition periodic() { return {BoundaryKind::periodic, 0.0}; }
    static BoundaryCondition mirror() { return {BoundaryKind::mirror, 0.0}; }
    static BoundaryCondition extend() { return {BoundaryKind::extend, 0.0}; }

    bool operator==(const BoundaryCondition&) const = default;
};

std::string to_string(BoundaryKind kind);
BoundaryKind parse_boundary_kind(const std::string& name);

/// Uniform discretization. 2D grids are square: the same point count and
/// spacing on both axes.
struct GridSpec {
    int dims = 1;
    std::size_t n_points = 0;
    double h = 0.0;
    double k = 0.0;
    BoundaryCondition bc;

    /// Mesh ratio k / h^2.
    double ratio() const { return k / (h * h); }
    /// Number of nodes in one field slice.
    std::size_t size() const { return dims == 1 ? n_points : n_points * n_points; }

    bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(std::size_t n_points, double h, double k, BoundaryCondition bc, int dims = 1);

/// One time slice of a scalar field. 1D fields have `extent` entries, 2D
/// fields are `extent x extent`, stored row-major.
class FieldState {
public:
    FieldState() = default;
    FieldState(int dims, std::size_t extent, std::vector<double> values);

    static FieldState zeros(const GridSpec& grid);
    static FieldState constant(const GridSpec& grid, double value);
    static FieldState from_values(const GridSpec& grid, std::vector<double> values);

    int dims() const { return dims_; }
    std::size_t extent() const { return extent_; }
    std::size_t size() const { return values_.size(); }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    double at(std::size_t row, std::size_t col) const { return values_[row * extent_ + col]; }
    double& at(std::size_t row, std::size_t col) { return values_[row * extent_ + col]; }

    bool matches(const GridSpec& grid) const;
    bool all_finite() const;

    double min() const;
    double max() const;
    double sum() const;
    double max_abs() const;

    bool operator==(const FieldState&) const = default;

private:
    int dims_ = 1;
    std::size_t extent_ = 0;
    std::vector<double> values_;
};

/// Two-component state (U, V) of a Turing system on a shared grid.
struct TwoComponentState {
    FieldState u;
    FieldState v;
};

/// Resolution of one ghost position: either an interior index, or a fixed value.
struct GhostSource {
    bool is_index = true;
    std::size_t index = 0;
    double value = 0.0;
};

/// Where padded position `pos` (may be negative or >= n) of a 1D axis of
/// length n takes its value from under `bc`. Interior positions map to themselves.
GhostSource resolve_ghost(long pos, std::size_t n, const BoundaryCondition& bc);

/// Extend `field` by `width` ghost cells per side (per axis in 2D).
FieldState pad(const FieldState& field, const BoundaryCondition& bc, std::size_t width);

/// Drop `width` ghost cells per side.
FieldState crop(const FieldState& field, std::size_t width);

} // namespace npde
