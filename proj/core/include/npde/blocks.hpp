#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "npde/grid.hpp"
#include "npde/linalg.hpp"
#include "npde/reaction.hpp"
#include "npde/stencil.hpp"

namespace npde {

/// Locally connected 1D convolution: one 3-tap kernel per output node.
///
/// forward(u)_j = sum_i kernels[j][i] * padded(u)_{j+i-1} + bias_j + reaction_step * C(u_j)
///
/// The reaction is the additive PDE term evaluated on the input slice, so a
/// generated block reproduces one explicit solver step.
struct Conv1DBlock {
    std::vector<std::array<double, 3>> kernels;
    std::vector<double> bias;
    BoundaryCondition bc;
    ReactionSpec activation;
    double reaction_step = 0.0;

    std::size_t size() const { return kernels.size(); }
    FieldState forward(const FieldState& u) const;
    /// forward(u) - u: the block seen as the residual branch F(u).
    FieldState forward_without_identity(const FieldState& u) const;
};

/// Shared 3x3 kernel applied depthwise to every channel, plus the Euler
/// identity and the same additive reaction convention as Conv1DBlock.
struct Conv2DBlock {
    Stencil2D kernel;
    std::size_t channels_in = 1;
    std::size_t channels_out = 1;
    BoundaryCondition bc;
    ReactionSpec activation;
    double reaction_step = 0.0;

    FieldState forward(const FieldState& u) const;
    std::vector<FieldState> forward(const std::vector<FieldState>& channels) const;
    FieldState forward_without_identity(const FieldState& u) const;
};

/// Fully connected layer, forward(u) = activation(W u + bias), W is l x m.
struct DenseBlock {
    Matrix w;
    Vector bias;
    ReactionSpec activation;

    std::size_t inputs() const { return static_cast<std::size_t>(w.cols()); }
    std::size_t outputs() const { return static_cast<std::size_t>(w.rows()); }

    Vector pre_activation(const Vector& u) const;
    Vector forward(const Vector& u) const;
    /// Multi-channel view: channel i is a full-size kernel (row i of W)
    /// slid over the whole input once.
    std::vector<std::vector<double>> channel_kernels() const;
    Vector forward_channels(const Vector& u) const;
};

/// Recurrent cell from the traveling-wave recurrence
///   -v (u_{t+1} - u_t)/k = Dxy L_T u_t + Dz (u_{t+1} - 2 u_t + u_{t-1})/h^2 + f
/// solved for u_{t+1}. With d = v h^2 + k Dz:
///   W1 = (v h^2 I - k (h^2 Dxy L_T - 2 Dz I)) / d
///   W2 = -(k Dz / d) I
///   U  = -(k h^2 / d) I
/// and the shift W3 = I, W4 = 0 on the stacked state [u_t; u_{t-1}].
struct RNNCell {
    Matrix w1;
    Matrix w2;
    Matrix u;
    Matrix transverse_laplacian;
    double dxy = 0.0;
    double dz = 0.0;
    double speed = 1.0;
    double h = 1.0;
    double k = 1.0;

    std::size_t size() const { return static_cast<std::size_t>(w1.rows()); }
    /// [[W1, W2], [I, 0]]
    Matrix state_matrix() const;
};

/// Bilinear energy E(v, h) = -v^T W h - b^T v - c^T h, W is visible x hidden.
struct RBMEnergy {
    Matrix w;
    Vector b;
    Vector c;

    std::size_t visible() const { return static_cast<std::size_t>(w.rows()); }
    std::size_t hidden() const { return static_cast<std::size_t>(w.cols()); }
};

Conv1DBlock gen_conv1d(const EllipticCoefficients& coeffs, const GridSpec& grid);
Conv2DBlock gen_conv2d(const Stencil2D& kernel_init, std::size_t channels, BoundaryCondition bc = {});
DenseBlock gen_dense(Matrix w, Vector bias, ReactionSpec activation);

Vector residual_step(const Vector& x, const DenseBlock& block);
FieldState residual_step(const FieldState& x, const Conv1DBlock& block);

/// Matrix of the 3-point Laplacian (1/h^2)[1,-2,1] on n nodes with the
/// boundary folded in (wrap, mirror and extend fold onto interior columns,
/// dirichlet ghosts are dropped).
Matrix transverse_laplacian_matrix(std::size_t n, double h, const BoundaryCondition& bc);

RNNCell gen_rnn_cell(double dxy, double dz, double speed, const GridSpec& grid);

/// Top half u_{t+1} = W1 u_t + W2 u_{t-1} + U f, bottom half u_t.
Vector rnn_forward(const RNNCell& cell, const Vector& stacked_state, const Vector& input);

struct ElmanOutput {
    Vector hidden;
    Vector output;
};

/// h = sh(U x + W h_prev + b_h), o = so(V h + b_o)
ElmanOutput elman_forward(const Vector& x, const Vector& h_prev, const Matrix& u, const Matrix& w,
                          const Matrix& v, const Vector& b_h, const Vector& b_o, const ReactionSpec& sigma_h,
                          const ReactionSpec& sigma_o);

/// Matrix M of the explicit recurrence u^{n+1} = M u^n (diffusion part, 1D).
Matrix explicit_step_matrix(const EllipticCoefficients& coeffs, const GridSpec& grid);
/// RBM with W = M^T, so the hidden pre-activation W^T v is one explicit step of v.
RBMEnergy gen_rbm(const EllipticCoefficients& coeffs, const GridSpec& grid, Vector b, Vector c);

double rbm_energy(const RBMEnergy& rbm, const Vector& v, const Vector& h);
/// F(v) = -b^T v - sum_j softplus(c_j + (W^T v)_j)
double rbm_free_energy(const RBMEnergy& rbm, const Vector& v);

/// log(1 + exp(x)) without overflow.
double softplus(double x);

} // namespace npde
