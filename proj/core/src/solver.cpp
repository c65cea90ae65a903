#include "npde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "npde/error.hpp"

namespace npde {

namespace {

void require_finite(const std::vector<double>& values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw DivergenceError(std::string(what) + ": non-finite value at node " + std::to_string(i));
        }
    }
}

void check_inputs(const FieldState& field, const EllipticCoefficients& coeffs, const GridSpec& grid) {
    if (!field.matches(grid)) throw ShapeError("field shape does not match grid");
    coeffs.validate(grid);
}

// Tridiagonal system with optional periodic corners. Row j reads
//   sub[j] x_{j-1} + diag[j] x_j + sup[j] x_{j+1} (+ corners) = rhs[j]
struct CyclicTridiagonal {
    std::vector<double> sub, diag, sup;
    double top_right = 0.0;   // row 0, column n-1
    double bottom_left = 0.0; // row n-1, column 0
    bool cyclic = false;

    explicit CyclicTridiagonal(std::size_t n) : sub(n, 0.0), diag(n, 0.0), sup(n, 0.0) {}

    void add(std::size_t row, std::size_t col, double value) {
        const std::size_t n = diag.size();
        if (col == row) {
            diag[row] += value;
        } else if (col + 1 == row) {
            sub[row] += value;
        } else if (col == row + 1) {
            sup[row] += value;
        } else if (row == 0 && col == n - 1) {
            top_right += value;
            cyclic = true;
        } else if (row == n - 1 && col == 0) {
            bottom_left += value;
            cyclic = true;
        } else {
            throw std::logic_error("entry outside the cyclic tridiagonal band");
        }
    }
};

std::vector<double> thomas(const std::vector<double>& sub, const std::vector<double>& diag,
                           const std::vector<double>& sup, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> c(n, 0.0);
    double scale = 0.0;
    for (double d : diag) scale = std::max(scale, std::abs(d));
    const double tiny = 1e-300 + 1e-14 * scale;

    double denom = diag[0];
    if (std::abs(denom) <= tiny) throw SingularSystemError("tridiagonal solve: zero pivot at row 0");
    c[0] = sup[0] / denom;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - sub[i] * c[i - 1];
        if (std::abs(denom) <= tiny || !std::isfinite(denom)) {
            throw SingularSystemError("tridiagonal solve: zero pivot at row " + std::to_string(i));
        }
        c[i] = sup[i] / denom;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
    return rhs;
}

std::vector<double> solve_system(const CyclicTridiagonal& m, const std::vector<double>& rhs) {
    if (!m.cyclic) return thomas(m.sub, m.diag, m.sup, rhs);

    // Sherman-Morrison: T = A - u v^T with a modified first/last diagonal
    const std::size_t n = m.diag.size();
    const double alpha = m.bottom_left;
    const double beta = m.top_right;
    const double gamma = m.diag[0] != 0.0 ? -m.diag[0] : -1.0;

    std::vector<double> diag = m.diag;
    diag[0] -= gamma;
    diag[n - 1] -= alpha * beta / gamma;
    const std::vector<double> x = thomas(m.sub, diag, m.sup, rhs);

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    const std::vector<double> z = thomas(m.sub, diag, m.sup, u);

    const double denom = 1.0 + z[0] + beta * z[n - 1] / gamma;
    if (std::abs(denom) < 1e-300) throw SingularSystemError("cyclic tridiagonal solve: singular correction");
    const double fact = (x[0] + beta * x[n - 1] / gamma) / denom;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - fact * z[i];
    return out;
}

} // namespace

FieldState step_explicit(const FieldState& field, const EllipticCoefficients& coeffs, const GridSpec& grid) {
    check_inputs(field, coeffs, grid);
    const std::size_t n = grid.n_points;
    const auto u = field.values();
    std::vector<double> out(grid.size());

    if (grid.dims == 1) {
        const double r = grid.ratio();
        const BoundaryCondition abc = coefficient_bc(grid.bc);
        const FieldState p = pad(field, grid.bc, 1);
        const auto& a = coeffs.a;
        const double a_left_ghost = a[resolve_ghost(-1, n, abc).index];
        const double a_right_ghost = a[resolve_ghost(static_cast<long>(n), n, abc).index];
        for (std::size_t j = 0; j < n; ++j) {
            const double a_left = j == 0 ? a_left_ghost : a[j - 1];
            const double a_right = j + 1 == n ? a_right_ghost : a[j + 1];
            out[j] = (1.0 - 2.0 * r * a[j]) * u[j] + r * a_left * p[j] + r * a_right * p[j + 2];
        }
    } else {
        const FieldState d = diffusion_apply(field, coeffs.a, grid, coeffs.laplacian);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] + grid.k * d[i];
    }

    if (!coeffs.convection_free()) {
        const FieldState d = centered_difference(field, grid);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += grid.k * coeffs.b[i] * d[i];
    }
    if (coeffs.reaction.kind != ReactionKind::none) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += grid.k * coeffs.reaction.evaluate(u[i], i);
    }
    require_finite(out, "step_explicit");
    return FieldState(grid.dims, n, std::move(out));
}

namespace {

CyclicTridiagonal assemble_implicit(const EllipticCoefficients& coeffs, const GridSpec& grid,
                                    std::vector<double>& rhs) {
    const std::size_t n = grid.n_points;
    const double r = grid.ratio();
    const BoundaryCondition abc = coefficient_bc(grid.bc);
    CyclicTridiagonal m(n);
    for (std::size_t j = 0; j < n; ++j) {
        m.add(j, j, 1.0 + 2.0 * r * coeffs.a[j]);
        for (long offset : {-1L, 1L}) {
            const long pos = static_cast<long>(j) + offset;
            const double a_n = coeffs.a[resolve_ghost(pos, n, abc).index];
            const GhostSource src = resolve_ghost(pos, n, grid.bc);
            if (src.is_index) {
                m.add(j, src.index, -r * a_n);
            } else {
                rhs[j] += r * a_n * src.value;
            }
        }
    }
    return m;
}

} // namespace

FieldState step_implicit(const FieldState& field, const EllipticCoefficients& coeffs, const GridSpec& grid) {
    check_inputs(field, coeffs, grid);
    if (grid.dims != 1) throw std::invalid_argument("step_implicit supports 1D grids only");
    if (!coeffs.convection_free()) throw std::invalid_argument("step_implicit requires B = 0");

    std::vector<double> rhs(field.values().begin(), field.values().end());
    if (coeffs.reaction.kind != ReactionKind::none) {
        for (std::size_t j = 0; j < rhs.size(); ++j) rhs[j] += grid.k * coeffs.reaction.evaluate(field[j], j);
    }
    const CyclicTridiagonal m = assemble_implicit(coeffs, grid, rhs);
    std::vector<double> out = solve_system(m, rhs);
    require_finite(out, "step_implicit");
    return FieldState(1, grid.n_points, std::move(out));
}

double implicit_residual(const FieldState& next, const FieldState& rhs, const EllipticCoefficients& coeffs,
                         const GridSpec& grid) {
    check_inputs(next, coeffs, grid);
    if (!rhs.matches(grid)) throw ShapeError("rhs shape does not match grid");
    const std::size_t n = grid.n_points;
    const double r = grid.ratio();
    const BoundaryCondition abc = coefficient_bc(grid.bc);
    const FieldState pu = pad(next, grid.bc, 1);
    const FieldState pa = pad(FieldState(1, n, coeffs.a), abc, 1);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double lhs = (1.0 + 2.0 * r * coeffs.a[j]) * next[j] - r * pa[j] * pu[j] - r * pa[j + 2] * pu[j + 2];
        worst = std::max(worst, std::abs(lhs - rhs[j]));
    }
    return worst;
}

TwoComponentState step_two_component(const TwoComponentState& state, double du, double dv,
                                     const TwoComponentReaction& rxn, const GridSpec& grid) {
    if (grid.dims != 2 || !state.u.matches(grid) || !state.v.matches(grid)) {
        throw ShapeError("two-component step needs two 2D fields on the grid");
    }
    const Stencil2D lap = laplacian_2d_9pt().scaled(1.0 / (grid.h * grid.h));
    const FieldState lu = apply_stencil(state.u, lap, grid.bc);
    const FieldState lv = apply_stencil(state.v, lap, grid.bc);
    std::vector<double> u_next(grid.size());
    std::vector<double> v_next(grid.size());
    for (std::size_t i = 0; i < u_next.size(); ++i) {
        const double u = state.u[i];
        const double v = state.v[i];
        u_next[i] = u + grid.k * (du * lu[i] + rxn.f(u, v));
        v_next[i] = v + grid.k * (dv * lv[i] + rxn.g(u, v));
    }
    require_finite(u_next, "step_two_component (U)");
    require_finite(v_next, "step_two_component (V)");
    return {FieldState(2, grid.n_points, std::move(u_next)), FieldState(2, grid.n_points, std::move(v_next))};
}

void solve_streaming(const FieldState& initial, const EllipticCoefficients& coeffs, const GridSpec& grid,
                     std::size_t n_steps, Scheme scheme, const SliceObserver& observe) {
    if (n_steps < 1) throw std::invalid_argument("solve_forward: n_steps must be >= 1");
    check_inputs(initial, coeffs, grid);
    if (scheme == Scheme::implicit_euler && grid.dims != 1) {
        throw std::invalid_argument("implicit scheme supports 1D grids only");
    }

    const double bound = kDivergenceGrowth * std::max(1.0, initial.max_abs());
    observe(0, initial);
    FieldState current = initial;
    for (std::size_t step = 0; step < n_steps; ++step) {
        try {
            FieldState next = scheme == Scheme::explicit_euler ? step_explicit(current, coeffs, grid)
                                                               : step_implicit(current, coeffs, grid);
            if (next.max_abs() > bound) {
                throw DivergenceError("solution magnitude " + std::to_string(next.max_abs()) +
                                      " exceeds divergence bound");
            }
            current = std::move(next);
        } catch (const DivergenceError& e) {
            throw DivergenceError(std::string(e.what()) + " (step " + std::to_string(step) + ")", step);
        }
        observe(step + 1, current);
    }
}

Trajectory solve_forward(const FieldState& initial, const EllipticCoefficients& coeffs, const GridSpec& grid,
                         std::size_t n_steps, Scheme scheme) {
    Trajectory traj{grid, {}};
    if (n_steps >= 1) traj.slices.reserve(n_steps + 1);
    solve_streaming(initial, coeffs, grid, n_steps, scheme,
                    [&traj](std::size_t, const FieldState& f) { traj.slices.push_back(f); });
    return traj;
}

TwoComponentTrajectory solve_two_component(const TwoComponentState& initial, double du, double dv,
                                           const TwoComponentReaction& rxn, const GridSpec& grid,
                                           std::size_t n_steps, std::size_t stride) {
    if (n_steps < 1) throw std::invalid_argument("solve_two_component: n_steps must be >= 1");
    if (stride < 1) throw std::invalid_argument("solve_two_component: stride must be >= 1");
    TwoComponentTrajectory traj{grid, {initial}};
    TwoComponentState state = initial;
    for (std::size_t step = 0; step < n_steps; ++step) {
        try {
            state = step_two_component(state, du, dv, rxn, grid);
        } catch (const DivergenceError& e) {
            throw DivergenceError(std::string(e.what()) + " (step " + std::to_string(step) + ")", step);
        }
        if ((step + 1) % stride == 0) traj.slices.push_back(state);
    }
    return traj;
}

Stability cfl_check(const EllipticCoefficients& coeffs, const GridSpec& grid) {
    coeffs.validate(grid);
    const double a_max = *std::max_element(coeffs.a.begin(), coeffs.a.end());
    const double a_min = *std::min_element(coeffs.a.begin(), coeffs.a.end());
    Stability s;
    s.limit = grid.dims == 1 ? 0.5 : 0.25;
    s.max_r_a = grid.ratio() * a_max;
    // anti-diffusion (A < 0) is unstable for any step
    s.stable = s.max_r_a <= s.limit && a_min >= 0.0;
    return s;
}

} // namespace npde
