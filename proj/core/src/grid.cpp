#include "npde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "npde/error.hpp"

namespace npde {

std::string to_string(BoundaryKind kind) {
    switch (kind) {
    case BoundaryKind::dirichlet: return "dirichlet";
    case BoundaryKind::periodic: return "periodic";
    case BoundaryKind::mirror: return "mirror";
    case BoundaryKind::extend: return "extend";
    }
    return "unknown";
}

BoundaryKind parse_boundary_kind(const std::string& name) {
    if (name == "dirichlet") return BoundaryKind::dirichlet;
    if (name == "periodic" || name == "wrap") return BoundaryKind::periodic;
    if (name == "mirror") return BoundaryKind::mirror;
    if (name == "extend" || name == "extended") return BoundaryKind::extend;
    throw std::invalid_argument("unknown boundary condition '" + name + "'");
}

GridSpec make_grid(std::size_t n_points, double h, double k, BoundaryCondition bc, int dims) {
    if (dims != 1 && dims != 2) {
        throw std::invalid_argument("grid dimensionality must be 1 or 2");
    }
    if (n_points < 3) {
        throw std::invalid_argument("grid too small: n_points must be >= 3");
    }
    if (!std::isfinite(h) || h <= 0.0) {
        throw std::invalid_argument("grid spacing h must be finite and positive");
    }
    if (!std::isfinite(k) || k <= 0.0) {
        throw std::invalid_argument("time step k must be finite and positive");
    }
    if (bc.kind == BoundaryKind::dirichlet && !std::isfinite(bc.value)) {
        throw std::invalid_argument("dirichlet boundary value must be finite");
    }
    return GridSpec{dims, n_points, h, k, bc};
}

FieldState::FieldState(int dims, std::size_t extent, std::vector<double> values)
    : dims_(dims), extent_(extent), values_(std::move(values)) {
    if (dims != 1 && dims != 2) {
        throw std::invalid_argument("field dimensionality must be 1 or 2");
    }
    const std::size_t expected = dims == 1 ? extent : extent * extent;
    if (values_.size() != expected) {
        throw ShapeError("field value count " + std::to_string(values_.size()) +
                         " does not match shape (expected " + std::to_string(expected) + ")");
    }
    if (!all_finite()) {
        throw std::invalid_argument("field contains non-finite entries");
    }
}

FieldState FieldState::zeros(const GridSpec& grid) { return constant(grid, 0.0); }

FieldState FieldState::constant(const GridSpec& grid, double value) {
    return FieldState(grid.dims, grid.n_points, std::vector<double>(grid.size(), value));
}

FieldState FieldState::from_values(const GridSpec& grid, std::vector<double> values) {
    return FieldState(grid.dims, grid.n_points, std::move(values));
}

bool FieldState::matches(const GridSpec& grid) const {
    return dims_ == grid.dims && extent_ == grid.n_points;
}

bool FieldState::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double FieldState::min() const { return *std::min_element(values_.begin(), values_.end()); }
double FieldState::max() const { return *std::max_element(values_.begin(), values_.end()); }

double FieldState::sum() const {
    // fixed left-to-right order, conservation checks rely on it
    double s = 0.0;
    for (double x : values_) s += x;
    return s;
}

double FieldState::max_abs() const {
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::abs(x));
    return m;
}

GhostSource resolve_ghost(long pos, std::size_t n, const BoundaryCondition& bc) {
    const long len = static_cast<long>(n);
    if (pos >= 0 && pos < len) {
        return {true, static_cast<std::size_t>(pos), 0.0};
    }
    switch (bc.kind) {
    case BoundaryKind::dirichlet:
        return {false, 0, bc.value};
    case BoundaryKind::periodic: {
        long p = pos % len;
        if (p < 0) p += len;
        return {true, static_cast<std::size_t>(p), 0.0};
    }
    case BoundaryKind::mirror: {
        const long period = 2 * (len - 1);
        long p = pos % period;
        if (p < 0) p += period;
        if (p >= len) p = period - p;
        return {true, static_cast<std::size_t>(p), 0.0};
    }
    case BoundaryKind::extend:
        return {true, pos < 0 ? 0u : n - 1, 0.0};
    }
    return {false, 0, 0.0};
}

FieldState pad(const FieldState& field, const BoundaryCondition& bc, std::size_t width) {
    if (width < 1) {
        throw std::invalid_argument("pad width must be >= 1");
    }
    const std::size_t n = field.extent();
    const std::size_t m = n + 2 * width;
    const long w = static_cast<long>(width);
    std::vector<double> out;
    if (field.dims() == 1) {
        out.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const GhostSource src = resolve_ghost(static_cast<long>(i) - w, n, bc);
            out[i] = src.is_index ? field[src.index] : src.value;
        }
    } else {
        out.resize(m * m);
        for (std::size_t i = 0; i < m; ++i) {
            const GhostSource row = resolve_ghost(static_cast<long>(i) - w, n, bc);
            for (std::size_t j = 0; j < m; ++j) {
                const GhostSource col = resolve_ghost(static_cast<long>(j) - w, n, bc);
                out[i * m + j] = (row.is_index && col.is_index) ? field.at(row.index, col.index)
                                                                : bc.value;
            }
        }
    }
    return FieldState(field.dims(), m, std::move(out));
}

FieldState crop(const FieldState& field, std::size_t width) {
    const std::size_t m = field.extent();
    if (2 * width >= m) {
        throw std::invalid_argument("crop width leaves an empty field");
    }
    const std::size_t n = m - 2 * width;
    std::vector<double> out;
    if (field.dims() == 1) {
        out.assign(field.values().begin() + static_cast<long>(width),
                   field.values().begin() + static_cast<long>(width + n));
    } else {
        out.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) out.push_back(field.at(i + width, j + width));
        }
    }
    return FieldState(field.dims(), n, std::move(out));
}

} // namespace npde
