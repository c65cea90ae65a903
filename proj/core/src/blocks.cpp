#include "npde/blocks.hpp"

#include <cmath>
#include <stdexcept>

#include "npde/error.hpp"

namespace npde {

namespace {

void add_reaction(std::vector<double>& out, const FieldState& u, const ReactionSpec& rxn, double step) {
    if (rxn.kind == ReactionKind::none || step == 0.0) return;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += step * rxn.evaluate(u[i], i);
}

} // namespace

FieldState Conv1DBlock::forward(const FieldState& u) const {
    if (u.dims() != 1 || u.extent() != kernels.size()) {
        throw ShapeError("conv1d block expects a 1D field with " + std::to_string(kernels.size()) + " nodes");
    }
    const FieldState p = pad(u, bc, 1);
    std::vector<double> out(kernels.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const auto& w = kernels[j];
        out[j] = w[0] * p[j] + w[1] * p[j + 1] + w[2] * p[j + 2];
        if (!bias.empty()) out[j] += bias[j];
    }
    add_reaction(out, u, activation, reaction_step);
    const std::size_t n = out.size();
    return FieldState(1, n, std::move(out));
}

FieldState Conv1DBlock::forward_without_identity(const FieldState& u) const {
    Conv1DBlock branch = *this;
    for (auto& w : branch.kernels) w[1] -= 1.0;
    return branch.forward(u);
}

FieldState Conv2DBlock::forward(const FieldState& u) const {
    const FieldState conv = apply_stencil(u, kernel, bc);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] + conv[i];
    add_reaction(out, u, activation, reaction_step);
    return FieldState(2, u.extent(), std::move(out));
}

std::vector<FieldState> Conv2DBlock::forward(const std::vector<FieldState>& channels) const {
    if (channels.size() != channels_in) {
        throw ShapeError("conv2d block expects " + std::to_string(channels_in) + " channels");
    }
    std::vector<FieldState> out;
    out.reserve(channels.size());
    for (const auto& c : channels) out.push_back(forward(c));
    return out;
}

FieldState Conv2DBlock::forward_without_identity(const FieldState& u) const {
    FieldState out = forward(u);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= u[i];
    return out;
}

Vector DenseBlock::pre_activation(const Vector& u) const {
    if (static_cast<std::size_t>(u.size()) != inputs()) {
        throw ShapeError("dense block expects " + std::to_string(inputs()) + " inputs, got " +
                         std::to_string(u.size()));
    }
    return w * u + bias;
}

Vector DenseBlock::forward(const Vector& u) const {
    Vector a = pre_activation(u);
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = activation.activate(a[i], static_cast<std::size_t>(i));
    return a;
}

std::vector<std::vector<double>> DenseBlock::channel_kernels() const {
    std::vector<std::vector<double>> out(outputs(), std::vector<double>(inputs()));
    for (std::size_t i = 0; i < outputs(); ++i) {
        for (std::size_t j = 0; j < inputs(); ++j) out[i][j] = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return out;
}

Vector DenseBlock::forward_channels(const Vector& u) const {
    if (static_cast<std::size_t>(u.size()) != inputs()) throw ShapeError("dense block input size mismatch");
    const auto kernels = channel_kernels();
    Vector out(static_cast<Eigen::Index>(outputs()));
    for (std::size_t c = 0; c < kernels.size(); ++c) {
        // a full-size kernel has exactly one valid placement
        double acc = 0.0;
        for (std::size_t j = 0; j < kernels[c].size(); ++j) acc += kernels[c][j] * u[static_cast<Eigen::Index>(j)];
        acc += bias[static_cast<Eigen::Index>(c)];
        out[static_cast<Eigen::Index>(c)] = activation.activate(acc, c);
    }
    return out;
}

Conv1DBlock gen_conv1d(const EllipticCoefficients& coeffs, const GridSpec& grid) {
    if (grid.dims != 1) throw ShapeError("gen_conv1d needs a 1D grid");
    coeffs.validate(grid);
    const std::size_t n = grid.n_points;
    const BoundaryCondition abc = coefficient_bc(grid.bc);
    Conv1DBlock block;
    block.bc = grid.bc;
    block.activation = coeffs.reaction;
    block.reaction_step = grid.k;
    block.kernels.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const long jj = static_cast<long>(j);
        const double a_left = coeffs.a[resolve_ghost(jj - 1, n, abc).index];
        const double a_right = coeffs.a[resolve_ghost(jj + 1, n, abc).index];
        const Stencil1D s = variable_stencil_1d(a_left, coeffs.a[j], a_right, grid.h);
        block.kernels[j] = {grid.k * s.taps[0], 1.0 + grid.k * s.taps[1], grid.k * s.taps[2]};
    }
    return block;
}

Conv2DBlock gen_conv2d(const Stencil2D& kernel_init, std::size_t channels, BoundaryCondition bc) {
    if (channels < 1) throw std::invalid_argument("conv2d block needs at least one channel");
    for (const auto& row : kernel_init.taps) {
        for (double t : row) {
            if (!std::isfinite(t)) throw std::invalid_argument("conv2d kernel must be finite");
        }
    }
    Conv2DBlock block;
    block.kernel = kernel_init;
    block.channels_in = channels;
    block.channels_out = channels;
    block.bc = bc;
    return block;
}

DenseBlock gen_dense(Matrix w, Vector bias, ReactionSpec activation) {
    if (bias.size() != w.rows()) {
        throw ShapeError("dense bias has " + std::to_string(bias.size()) + " entries, W has " +
                         std::to_string(w.rows()) + " rows");
    }
    if (!w.allFinite() || !bias.allFinite()) throw std::invalid_argument("dense weights must be finite");
    activation.validate(static_cast<std::size_t>(w.rows()));
    return DenseBlock{std::move(w), std::move(bias), std::move(activation)};
}

Vector residual_step(const Vector& x, const DenseBlock& block) {
    if (block.outputs() != static_cast<std::size_t>(x.size())) {
        throw ShapeError("residual branch must preserve the state size");
    }
    return x + block.forward(x);
}

FieldState residual_step(const FieldState& x, const Conv1DBlock& block) {
    const FieldState f = block.forward_without_identity(x);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + f[i];
    const std::size_t n = out.size();
    return FieldState(1, n, std::move(out));
}

Matrix transverse_laplacian_matrix(std::size_t n, double h, const BoundaryCondition& bc) {
    const Stencil1D s = laplacian_1d(h);
    Matrix l = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        l(row, row) += s.taps[1];
        for (long offset : {-1L, 1L}) {
            const GhostSource src = resolve_ghost(static_cast<long>(j) + offset, n, bc);
            if (src.is_index) l(row, static_cast<Eigen::Index>(src.index)) += s.taps[offset < 0 ? 0 : 2];
        }
    }
    return l;
}

RNNCell gen_rnn_cell(double dxy, double dz, double speed, const GridSpec& grid) {
    if (!(speed > 0.0)) throw std::invalid_argument("rnn cell: speed v must be positive");
    const double h2 = grid.h * grid.h;
    const double d = speed * h2 + grid.k * dz;
    if (std::abs(d) < 1e-300 || !std::isfinite(d)) {
        throw std::invalid_argument("rnn cell: degenerate denominator v h^2 + k Dz");
    }
    const auto n = static_cast<Eigen::Index>(grid.n_points);
    const Matrix id = Matrix::Identity(n, n);
    RNNCell cell;
    cell.transverse_laplacian = transverse_laplacian_matrix(grid.n_points, grid.h, grid.bc);
    cell.w1 = (speed * h2 * id - grid.k * (h2 * dxy * cell.transverse_laplacian - 2.0 * dz * id)) / d;
    cell.w2 = -(grid.k * dz / d) * id;
    cell.u = -(grid.k * h2 / d) * id;
    cell.dxy = dxy;
    cell.dz = dz;
    cell.speed = speed;
    cell.h = grid.h;
    cell.k = grid.k;
    return cell;
}

Matrix RNNCell::state_matrix() const {
    const Eigen::Index n = w1.rows();
    Matrix w = Matrix::Zero(2 * n, 2 * n);
    w.topLeftCorner(n, n) = w1;
    w.topRightCorner(n, n) = w2;
    w.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
    return w;
}

Vector rnn_forward(const RNNCell& cell, const Vector& stacked_state, const Vector& input) {
    const Eigen::Index n = cell.w1.rows();
    if (stacked_state.size() != 2 * n || input.size() != n) {
        throw ShapeError("rnn_forward: expected state of size " + std::to_string(2 * n) + " and input of size " +
                         std::to_string(n));
    }
    Vector out(2 * n);
    out.head(n) = cell.w1 * stacked_state.head(n) + cell.w2 * stacked_state.tail(n) + cell.u * input;
    out.tail(n) = stacked_state.head(n);
    return out;
}

ElmanOutput elman_forward(const Vector& x, const Vector& h_prev, const Matrix& u, const Matrix& w,
                          const Matrix& v, const Vector& b_h, const Vector& b_o, const ReactionSpec& sigma_h,
                          const ReactionSpec& sigma_o) {
    if (u.cols() != x.size() || w.cols() != h_prev.size() || u.rows() != w.rows() || b_h.size() != u.rows() ||
        v.cols() != u.rows() || b_o.size() != v.rows()) {
        throw ShapeError("elman_forward: inconsistent shapes");
    }
    ElmanOutput out;
    out.hidden = u * x + w * h_prev + b_h;
    for (Eigen::Index i = 0; i < out.hidden.size(); ++i) {
        out.hidden[i] = sigma_h.activate(out.hidden[i], static_cast<std::size_t>(i));
    }
    out.output = v * out.hidden + b_o;
    for (Eigen::Index i = 0; i < out.output.size(); ++i) {
        out.output[i] = sigma_o.activate(out.output[i], static_cast<std::size_t>(i));
    }
    return out;
}

Matrix explicit_step_matrix(const EllipticCoefficients& coeffs, const GridSpec& grid) {
    if (grid.dims != 1) throw ShapeError("explicit_step_matrix needs a 1D grid");
    coeffs.validate(grid);
    const std::size_t n = grid.n_points;
    const double r = grid.ratio();
    const BoundaryCondition abc = coefficient_bc(grid.bc);
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        m(row, row) += 1.0 - 2.0 * r * coeffs.a[j];
        for (long offset : {-1L, 1L}) {
            const long pos = static_cast<long>(j) + offset;
            const GhostSource src = resolve_ghost(pos, n, grid.bc);
            if (!src.is_index) continue;
            m(row, static_cast<Eigen::Index>(src.index)) += r * coeffs.a[resolve_ghost(pos, n, abc).index];
        }
    }
    return m;
}

RBMEnergy gen_rbm(const EllipticCoefficients& coeffs, const GridSpec& grid, Vector b, Vector c) {
    Matrix w = explicit_step_matrix(coeffs, grid).transpose();
    if (b.size() != w.rows() || c.size() != w.cols()) throw ShapeError("rbm bias sizes do not match the grid");
    return RBMEnergy{std::move(w), std::move(b), std::move(c)};
}

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double rbm_energy(const RBMEnergy& rbm, const Vector& v, const Vector& h) {
    if (v.size() != rbm.w.rows() || h.size() != rbm.w.cols()) throw ShapeError("rbm_energy: shape mismatch");
    return -v.dot(rbm.w * h) - rbm.b.dot(v) - rbm.c.dot(h);
}

double rbm_free_energy(const RBMEnergy& rbm, const Vector& v) {
    if (v.size() != rbm.w.rows() || rbm.b.size() != rbm.w.rows() || rbm.c.size() != rbm.w.cols()) {
        throw ShapeError("rbm_free_energy: shape mismatch");
    }
    const Vector act = rbm.c + rbm.w.transpose() * v;
    double f = -rbm.b.dot(v);
    for (Eigen::Index j = 0; j < act.size(); ++j) f -= softplus(act[j]);
    return f;
}

} // namespace npde
