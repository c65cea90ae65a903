#pragma once

#include <array>
#include <vector>

#include "npde/grid.hpp"
#include "npde/reaction.hpp"

namespace npde {

/// Three taps [left, center, right].
struct Stencil1D {
    std::array<double, 3> taps{};

    double sum() const { return taps[0] + taps[1] + taps[2]; }
    bool operator==(const Stencil1D&) const = default;
};

/// 3x3 taps, `taps[a][b]` weights the neighbour at row offset a-1, column offset b-1.
struct Stencil2D {
    std::array<std::array<double, 3>, 3> taps{};

    double sum() const;
    Stencil2D scaled(double factor) const;
    bool operator==(const Stencil2D&) const = default;
};

enum class Laplacian2D { five_point, nine_point };

/// Coefficients of the elliptic operator  A-diffusion + B-convection + C(u).
/// A and B are node fields over the grid. A may go negative when learned;
/// `cfl_check` reports that rather than rejecting it.
struct EllipticCoefficients {
    std::vector<double> a;
    std::vector<double> b;
    ReactionSpec reaction;
    Laplacian2D laplacian = Laplacian2D::nine_point;

    static EllipticCoefficients constant(const GridSpec& grid, double a_value, double b_value = 0.0,
                                         ReactionSpec reaction = {});

    /// Throws ShapeError unless A, B (and a source term) have one entry per node.
    void validate(const GridSpec& grid) const;
    bool convection_free() const;
};

/// (1/h^2) [1, -2, 1]
Stencil1D laplacian_1d(double h);
/// [[0,1,0],[1,-4,1],[0,1,0]]
Stencil2D laplacian_2d_5pt();
/// [[0.25,0.5,0.25],[0.5,-3,0.5],[0.25,0.5,0.25]]
Stencil2D laplacian_2d_9pt();
Stencil2D laplacian_2d(Laplacian2D kind);

/// (1/h^2) [A_left, -2 A_center, A_right]
Stencil1D variable_stencil_1d(double a_left, double a_center, double a_right, double h);

/// out_j = sum_i taps_i * padded(field)_{j+i}, padding width 1 under `bc`.
FieldState apply_stencil(const FieldState& field, const Stencil1D& stencil, const BoundaryCondition& bc);
FieldState apply_stencil(const FieldState& field, const Stencil2D& stencil, const BoundaryCondition& bc);

/// Boundary rule for coefficient fields: like `bc`, except that dirichlet
/// replicates the edge coefficient instead of using the boundary value.
BoundaryCondition coefficient_bc(const BoundaryCondition& bc);

/// Diffusion part only: Laplacian stencil applied to the product A*u, divided by h^2.
FieldState diffusion_apply(const FieldState& field, const std::vector<double>& a, const GridSpec& grid,
                           Laplacian2D laplacian = Laplacian2D::nine_point);

/// Centered first difference (u_{j+1} - u_{j-1}) / (2h); in 2D the sum over both axes.
FieldState centered_difference(const FieldState& field, const GridSpec& grid);

/// Full elliptic operator: diffusion_apply + B * centered_difference + C(u).
FieldState elliptic_apply(const FieldState& field, const EllipticCoefficients& coeffs, const GridSpec& grid);

} // namespace npde
