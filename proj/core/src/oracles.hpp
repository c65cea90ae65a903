#pragma once

// Brute-force reference computations used by the verification suites and the
// tests. Deliberately written with plain loops over std::vector and their own
// boundary index logic so they share no code paths with the library.

#include <cstddef>
#include <utility>
#include <vector>

#include "npde/grid.hpp"

namespace npde::oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

/// Neighbour index under bc, or -1 for a dirichlet ghost.
long neighbour(long pos, long n, BoundaryKind kind);

enum class Rxn { none, fisher, linear };

/// u_j + r(A_{j-1}u_{j-1} - 2A_j u_j + A_{j+1}u_{j+1}) + k·C(u_j).
Vec explicit_step(const Vec& u, const Vec& a, const BoundaryCondition& bc, double r, double k, Rxn rxn,
                  double rate);

/// Σ_j W[i][j]·u[j] + b[i], one channel at a time.
Vec dense(const Mat& w, const Vec& b, const Vec& u);

/// Solves -v(u⁺ - u)/k = Dxy·L u + Dz(u⁺ - 2u + u⁻)/h² + f for u⁺ node by node.
Vec rnn_step(const Vec& u, const Vec& u_prev, const Vec& f, double dxy, double dz, double v, double h, double k,
             const BoundaryCondition& bc);

/// Gaussian elimination with partial pivoting.
Vec solve(Mat a, Vec b);

/// Minimizer of ½‖Jθ − t‖² via the normal equations.
Vec least_squares(const Mat& j, const Vec& t);

/// −H·g where H is built by explicit BFGS inverse updates from γI.
Vec bfgs_direction(const std::vector<std::pair<Vec, Vec>>& pairs, const Vec& g);

/// Elman cell with naive loops; sigmoid when `sigmoid` is set, identity otherwise.
std::pair<Vec, Vec> elman(const Vec& x, const Vec& h_prev, const Mat& u, const Mat& w, const Mat& v, const Vec& bh,
                          const Vec& bo, bool sigmoid);

} // namespace npde::oracle
