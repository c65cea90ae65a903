#include "npde/stencil.hpp"

#include <cmath>
#include <stdexcept>

#include "npde/error.hpp"

namespace npde {

namespace {

void require_dims(const FieldState& field, int dims) {
    if (field.dims() != dims) {
        throw ShapeError("stencil dimensionality " + std::to_string(dims) +
                         " does not match field dimensionality " + std::to_string(field.dims()));
    }
}

void require_grid(const FieldState& field, const GridSpec& grid) {
    if (!field.matches(grid)) {
        throw ShapeError("field shape does not match grid");
    }
}

// Value of a padded node field at (possibly ghost) position.
double padded_value(std::span<const double> values, long pos, std::size_t n, const BoundaryCondition& bc) {
    const GhostSource src = resolve_ghost(pos, n, bc);
    return src.is_index ? values[src.index] : src.value;
}

} // namespace

double Stencil2D::sum() const {
    double s = 0.0;
    for (const auto& row : taps) {
        for (double t : row) s += t;
    }
    return s;
}

Stencil2D Stencil2D::scaled(double factor) const {
    Stencil2D out = *this;
    for (auto& row : out.taps) {
        for (double& t : row) t *= factor;
    }
    return out;
}

EllipticCoefficients EllipticCoefficients::constant(const GridSpec& grid, double a_value, double b_value,
                                                    ReactionSpec reaction) {
    EllipticCoefficients c;
    c.a.assign(grid.size(), a_value);
    c.b.assign(grid.size(), b_value);
    c.reaction = std::move(reaction);
    return c;
}

void EllipticCoefficients::validate(const GridSpec& grid) const {
    if (a.size() != grid.size() || b.size() != grid.size()) {
        throw ShapeError("coefficient fields must have one entry per grid node (" +
                         std::to_string(grid.size()) + ")");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
            throw std::invalid_argument("coefficient fields must be finite");
        }
    }
    reaction.validate(grid.size());
}

bool EllipticCoefficients::convection_free() const {
    for (double x : b) {
        if (x != 0.0) return false;
    }
    return true;
}

Stencil1D laplacian_1d(double h) {
    if (!(h > 0.0)) throw std::invalid_argument("laplacian_1d: h must be positive");
    const double s = 1.0 / (h * h);
    return Stencil1D{{s, -2.0 * s, s}};
}

Stencil2D laplacian_2d_5pt() {
    return Stencil2D{{{{0.0, 1.0, 0.0}, {1.0, -4.0, 1.0}, {0.0, 1.0, 0.0}}}};
}

Stencil2D laplacian_2d_9pt() {
    return Stencil2D{{{{0.25, 0.5, 0.25}, {0.5, -3.0, 0.5}, {0.25, 0.5, 0.25}}}};
}

Stencil2D laplacian_2d(Laplacian2D kind) {
    return kind == Laplacian2D::five_point ? laplacian_2d_5pt() : laplacian_2d_9pt();
}

Stencil1D variable_stencil_1d(double a_left, double a_center, double a_right, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("variable_stencil_1d: h must be positive");
    const double inv = 1.0 / (h * h);
    return Stencil1D{{a_left * inv, -2.0 * a_center * inv, a_right * inv}};
}

FieldState apply_stencil(const FieldState& field, const Stencil1D& stencil, const BoundaryCondition& bc) {
    require_dims(field, 1);
    const FieldState p = pad(field, bc, 1);
    const std::size_t n = field.extent();
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = stencil.taps[0] * p[j] + stencil.taps[1] * p[j + 1] + stencil.taps[2] * p[j + 2];
    }
    return FieldState(1, n, std::move(out));
}

FieldState apply_stencil(const FieldState& field, const Stencil2D& stencil, const BoundaryCondition& bc) {
    require_dims(field, 2);
    const FieldState p = pad(field, bc, 1);
    const std::size_t n = field.extent();
    std::vector<double> out(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t a = 0; a < 3; ++a) {
                for (std::size_t b = 0; b < 3; ++b) acc += stencil.taps[a][b] * p.at(i + a, j + b);
            }
            out[i * n + j] = acc;
        }
    }
    return FieldState(2, n, std::move(out));
}

BoundaryCondition coefficient_bc(const BoundaryCondition& bc) {
    return bc.kind == BoundaryKind::dirichlet ? BoundaryCondition::extend() : bc;
}

FieldState diffusion_apply(const FieldState& field, const std::vector<double>& a, const GridSpec& grid,
                           Laplacian2D laplacian) {
    require_grid(field, grid);
    if (a.size() != grid.size()) throw ShapeError("diffusion field must match grid");
    const std::size_t n = grid.n_points;
    const BoundaryCondition abc = coefficient_bc(grid.bc);
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    const auto u = field.values();
    std::vector<double> out(grid.size());

    if (grid.dims == 1) {
        for (std::size_t j = 0; j < n; ++j) {
            const long jj = static_cast<long>(j);
            const double left = padded_value(a, jj - 1, n, abc) * padded_value(u, jj - 1, n, grid.bc);
            const double right = padded_value(a, jj + 1, n, abc) * padded_value(u, jj + 1, n, grid.bc);
            out[j] = (left - 2.0 * a[j] * u[j] + right) * inv_h2;
        }
        return FieldState(1, n, std::move(out));
    }

    // 2D: stencil applied to the padded product A*u
    std::vector<double> prod(grid.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a[i] * u[i];
    const std::size_t m = n + 2;
    std::vector<double> padded(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        const long ii = static_cast<long>(i) - 1;
        const GhostSource ru = resolve_ghost(ii, n, grid.bc);
        const GhostSource ra = resolve_ghost(ii, n, abc);
        for (std::size_t j = 0; j < m; ++j) {
            const long jj = static_cast<long>(j) - 1;
            const GhostSource cu = resolve_ghost(jj, n, grid.bc);
            const GhostSource ca = resolve_ghost(jj, n, abc);
            const double av = a[ra.index * n + ca.index];
            const double uv = (ru.is_index && cu.is_index) ? u[ru.index * n + cu.index] : grid.bc.value;
            padded[i * m + j] = (ru.is_index && cu.is_index) ? prod[ru.index * n + cu.index] : av * uv;
        }
    }
    const Stencil2D s = laplacian_2d(laplacian);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t da = 0; da < 3; ++da) {
                for (std::size_t db = 0; db < 3; ++db) acc += s.taps[da][db] * padded[(i + da) * m + j + db];
            }
            out[i * n + j] = acc * inv_h2;
        }
    }
    return FieldState(2, n, std::move(out));
}

FieldState centered_difference(const FieldState& field, const GridSpec& grid) {
    require_grid(field, grid);
    const std::size_t n = grid.n_points;
    const double inv_2h = 1.0 / (2.0 * grid.h);
    const FieldState p = pad(field, grid.bc, 1);
    std::vector<double> out(grid.size());
    if (grid.dims == 1) {
        for (std::size_t j = 0; j < n; ++j) out[j] = (p[j + 2] - p[j]) * inv_2h;
        return FieldState(1, n, std::move(out));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = p.at(i + 1, j + 2) - p.at(i + 1, j);
            const double dy = p.at(i + 2, j + 1) - p.at(i, j + 1);
            out[i * n + j] = (dx + dy) * inv_2h;
        }
    }
    return FieldState(2, n, std::move(out));
}

FieldState elliptic_apply(const FieldState& field, const EllipticCoefficients& coeffs, const GridSpec& grid) {
    require_grid(field, grid);
    coeffs.validate(grid);
    FieldState out = diffusion_apply(field, coeffs.a, grid, coeffs.laplacian);
    if (!coeffs.convection_free()) {
        const FieldState d = centered_difference(field, grid);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs.b[i] * d[i];
    }
    if (coeffs.reaction.kind != ReactionKind::none) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs.reaction.evaluate(field[i], i);
    }
    return out;
}

} // namespace npde
