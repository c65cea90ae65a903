#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "npde/grid.hpp"
#include "npde/reaction.hpp"
#include "npde/stencil.hpp"

namespace npde {

enum class Scheme { explicit_euler, implicit_euler };

struct Trajectory {
    GridSpec grid;
    std::vector<FieldState> slices;

    std::size_t steps() const { return slices.empty() ? 0 : slices.size() - 1; }
    const FieldState& final_slice() const { return slices.back(); }
};

struct TwoComponentTrajectory {
    GridSpec grid;
    std::vector<TwoComponentState> slices;
};

struct Stability {
    bool stable = true;
    /// r * max_j A_j
    double max_r_a = 0.0;
    /// bound the scheme was checked against (0.5 in 1D, 0.25 in 2D)
    double limit = 0.5;
};

/// Runaway threshold used alongside the non-finite check: a run diverges once
/// |u| exceeds this multiple of max(1, |u_0|_inf).
inline constexpr double kDivergenceGrowth = 1e12;

/// Forward Euler:  u' = u + k * elliptic_apply(u)
/// In 1D the diffusion part is evaluated as
///   (1 - 2 r A_j) u_j + r A_{j-1} u_{j-1} + r A_{j+1} u_{j+1},  r = k / h^2.
/// Reaction is evaluated on the incoming slice.
/// Throws DivergenceError when the result is not finite.
FieldState step_explicit(const FieldState& field, const EllipticCoefficients& coeffs, const GridSpec& grid);

/// Backward Euler for the diffusion part, reaction taken explicitly:
///   (1 + 2 r A_j) u'_j - r A_{j-1} u'_{j-1} - r A_{j+1} u'_{j+1} = u_j + k C(u_j)
/// 1D only, B must vanish. Thomas algorithm; periodic grids use a
/// Sherman-Morrison correction of the cyclic system.
FieldState step_implicit(const FieldState& field, const EllipticCoefficients& coeffs, const GridSpec& grid);

/// Residual max_j |(M u')_j - rhs_j| of the implicit system above.
double implicit_residual(const FieldState& next, const FieldState& rhs, const EllipticCoefficients& coeffs,
                         const GridSpec& grid);

/// One explicit step of the two-component system with the 9-point Laplacian:
///   U' = U + k (Du lap U + f(U,V)),  V' = V + k (Dv lap V + g(U,V))
TwoComponentState step_two_component(const TwoComponentState& state, double du, double dv,
                                     const TwoComponentReaction& rxn, const GridSpec& grid);

using SliceObserver = std::function<void(std::size_t step, const FieldState& slice)>;

/// Same stepping and divergence handling as solve_forward, but hands each
/// slice (step 0 = initial) to `observe` instead of storing it.
void solve_streaming(const FieldState& initial, const EllipticCoefficients& coeffs, const GridSpec& grid,
                     std::size_t n_steps, Scheme scheme, const SliceObserver& observe);

/// Runs `n_steps` steps. Divergence is rethrown with the failing step index.
Trajectory solve_forward(const FieldState& initial, const EllipticCoefficients& coeffs, const GridSpec& grid,
                         std::size_t n_steps, Scheme scheme);

/// Same for the two-component system; keeps every `stride`-th slice (plus the first).
TwoComponentTrajectory solve_two_component(const TwoComponentState& initial, double du, double dv,
                                           const TwoComponentReaction& rxn, const GridSpec& grid,
                                           std::size_t n_steps, std::size_t stride = 1);

/// Explicit Euler stability: stable iff r * max A <= 0.5 (1D) or <= 0.25 (2D).
Stability cfl_check(const EllipticCoefficients& coeffs, const GridSpec& grid);

} // namespace npde
