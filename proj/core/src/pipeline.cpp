#include "npde/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "npde/error.hpp"

namespace npde {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstSlice = Eigen::Map<const Vector>;
using Slice = Eigen::Map<Vector>;

std::size_t stage_input(const Stage& s) {
    return std::visit(
        [](const auto& st) -> std::size_t {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, DenseStage>) return st.inputs;
            else if constexpr (std::is_same_v<T, Conv1DStage>) return st.n;
            else return st.grid.n_points;
        },
        s);
}

std::size_t stage_output(const Stage& s) {
    if (const auto* d = std::get_if<DenseStage>(&s)) return d->outputs;
    return stage_input(s);
}

void require_differentiable(const ReactionSpec& r, const std::string& where) {
    switch (r.kind) {
    case ReactionKind::none:
    case ReactionKind::sigmoid:
    case ReactionKind::fisher:
    case ReactionKind::linear: return;
    default: throw std::invalid_argument(where + ": activation '" + to_string(r.kind) + "' is not supported in a pipeline");
    }
}

EllipticCoefficients diffusion_coeffs(const DiffusionStage& st, ConstSlice a, const ConstSlice* b) {
    EllipticCoefficients c;
    c.a.assign(a.data(), a.data() + a.size());
    if (b) c.b.assign(b->data(), b->data() + b->size());
    else c.b.assign(st.grid.size(), 0.0);
    c.reaction = st.reaction;
    return c;
}

Vector to_vector(const FieldState& f) {
    return Eigen::Map<const Vector>(f.values().data(), static_cast<Eigen::Index>(f.size()));
}

FieldState to_field(const Vector& v) {
    return FieldState(1, static_cast<std::size_t>(v.size()), std::vector<double>(v.data(), v.data() + v.size()));
}

} // namespace

Pipeline::Pipeline(std::vector<Stage> stages) : stages_(std::move(stages)) {
    for (std::size_t i = 0; i < stages_.size(); ++i) {
        const Stage& s = stages_[i];
        if (i > 0 && stage_output(stages_[i - 1]) != stage_input(s)) {
            throw ShapeError("pipeline stage " + std::to_string(i) + " expects " + std::to_string(stage_input(s)) +
                             " inputs but the previous stage produces " + std::to_string(stage_output(stages_[i - 1])));
        }
        std::visit(
            [&](const auto& st) {
                using T = std::decay_t<decltype(st)>;
                if constexpr (std::is_same_v<T, DenseStage>) {
                    if (st.inputs == 0 || st.outputs == 0) throw ShapeError("dense stage needs non-zero sizes");
                    require_differentiable(st.activation, "dense stage");
                    const std::string name = "dense" + std::to_string(i);
                    layout_.add("blocks", name, "W", st.inputs * st.outputs);
                    layout_.add("blocks", name, "b", st.outputs);
                    names_.push_back(name);
                } else if constexpr (std::is_same_v<T, Conv1DStage>) {
                    if (st.n < 3) throw ShapeError("conv1d stage needs at least 3 nodes");
                    require_differentiable(st.reaction, "conv1d stage");
                    const std::string name = "conv" + std::to_string(i);
                    layout_.add("blocks", name, "kernels", st.n * 3);
                    layout_.add("blocks", name, "bias", st.n);
                    names_.push_back(name);
                } else {
                    if (st.grid.dims != 1) throw ShapeError("diffusion stage supports 1D grids only");
                    if (st.n_steps < 1) throw std::invalid_argument("diffusion stage needs n_steps >= 1");
                    require_differentiable(st.reaction, "diffusion stage");
                    const std::string name = "diffusion" + std::to_string(i);
                    layout_.add("solver", name, "A", st.grid.n_points);
                    if (st.learn_convection) layout_.add("solver", name, "B", st.grid.n_points);
                    names_.push_back(name);
                }
            },
            s);
    }
}

std::size_t Pipeline::input_size() const { return stages_.empty() ? 0 : stage_input(stages_.front()); }
std::size_t Pipeline::output_size() const { return stages_.empty() ? 0 : stage_output(stages_.back()); }

ThetaVector Pipeline::init_theta(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    ThetaVector theta{Vector::Zero(static_cast<Eigen::Index>(layout_.total())), layout_};
    for (std::size_t i = 0; i < stages_.size(); ++i) {
        std::visit(
            [&](const auto& st) {
                using T = std::decay_t<decltype(st)>;
                auto fill = [&](const std::string& tensor, double lo, double hi) {
                    std::uniform_real_distribution<double> dist(lo, hi);
                    Slice v = theta.view(names_[i], tensor);
                    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = dist(rng);
                };
                if constexpr (std::is_same_v<T, DenseStage>) {
                    const double bound = 1.0 / std::sqrt(static_cast<double>(st.inputs));
                    fill("W", -bound, bound);
                    fill("b", -bound, bound);
                } else if constexpr (std::is_same_v<T, Conv1DStage>) {
                    const double bound = 1.0 / std::sqrt(3.0);
                    fill("kernels", -bound, bound);
                    fill("bias", -bound, bound);
                } else {
                    const double a_max = std::min(1.0 / std::sqrt(3.0), 0.45 / st.grid.ratio());
                    fill("A", 0.0, a_max);
                }
            },
            stages_[i]);
    }
    return theta;
}

namespace {

struct StageContext {
    const Stage& stage;
    const std::string& name;
};

Vector forward_stage(const StageContext& ctx, const ThetaVector& theta, const Vector& x) {
    return std::visit(
        [&](const auto& st) -> Vector {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, DenseStage>) {
                const ConstSlice w = theta.view(ctx.name, "W");
                const ConstSlice b = theta.view(ctx.name, "b");
                Eigen::Map<const RowMajorMatrix> wm(w.data(), static_cast<Eigen::Index>(st.outputs),
                                                    static_cast<Eigen::Index>(st.inputs));
                Vector z = wm * x + b;
                for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = st.activation.activate(z[j]);
                return z;
            } else if constexpr (std::is_same_v<T, Conv1DStage>) {
                const ConstSlice k = theta.view(ctx.name, "kernels");
                const ConstSlice bias = theta.view(ctx.name, "bias");
                const long n = static_cast<long>(st.n);
                Vector y(n);
                for (long j = 0; j < n; ++j) {
                    double acc = bias[j];
                    for (long i = 0; i < 3; ++i) {
                        const GhostSource src = resolve_ghost(j + i - 1, st.n, st.bc);
                        acc += k[3 * j + i] * (src.is_index ? x[static_cast<Eigen::Index>(src.index)] : src.value);
                    }
                    if (st.reaction.kind != ReactionKind::none) acc += st.reaction_step * st.reaction.evaluate(x[j]);
                    y[j] = acc;
                }
                return y;
            } else {
                const ConstSlice a = theta.view(ctx.name, "A");
                std::optional<ConstSlice> b;
                if (st.learn_convection) b.emplace(theta.view(ctx.name, "B"));
                const EllipticCoefficients coeffs = diffusion_coeffs(st, a, b ? &*b : nullptr);
                FieldState u = to_field(x);
                for (std::size_t s = 0; s < st.n_steps; ++s) u = step_explicit(u, coeffs, st.grid);
                return to_vector(u);
            }
        },
        ctx.stage);
}

// Accumulates dθ for this stage into `grad` and returns d input.
Vector backward_stage(const StageContext& ctx, const ThetaVector& theta, const Vector& x, const Vector& gy,
                      ThetaVector& grad) {
    return std::visit(
        [&](const auto& st) -> Vector {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, DenseStage>) {
                const ConstSlice w = theta.view(ctx.name, "W");
                const ConstSlice b = theta.view(ctx.name, "b");
                Eigen::Map<const RowMajorMatrix> wm(w.data(), static_cast<Eigen::Index>(st.outputs),
                                                    static_cast<Eigen::Index>(st.inputs));
                const Vector z = wm * x + b;
                Vector gz(z.size());
                for (Eigen::Index j = 0; j < z.size(); ++j) gz[j] = gy[j] * st.activation.activate_derivative(z[j]);
                Slice gw = grad.view(ctx.name, "W");
                Eigen::Map<RowMajorMatrix> gwm(gw.data(), wm.rows(), wm.cols());
                gwm += gz * x.transpose();
                grad.view(ctx.name, "b") += gz;
                return wm.transpose() * gz;
            } else if constexpr (std::is_same_v<T, Conv1DStage>) {
                const ConstSlice k = theta.view(ctx.name, "kernels");
                Slice gk = grad.view(ctx.name, "kernels");
                Slice gb = grad.view(ctx.name, "bias");
                const long n = static_cast<long>(st.n);
                Vector gx = Vector::Zero(n);
                for (long j = 0; j < n; ++j) {
                    gb[j] += gy[j];
                    for (long i = 0; i < 3; ++i) {
                        const GhostSource src = resolve_ghost(j + i - 1, st.n, st.bc);
                        const double p = src.is_index ? x[static_cast<Eigen::Index>(src.index)] : src.value;
                        gk[3 * j + i] += gy[j] * p;
                        if (src.is_index) gx[static_cast<Eigen::Index>(src.index)] += gy[j] * k[3 * j + i];
                    }
                    if (st.reaction.kind != ReactionKind::none) {
                        gx[j] += gy[j] * st.reaction_step * st.reaction.derivative(x[j]);
                    }
                }
                return gx;
            } else {
                const GridSpec& grid = st.grid;
                const ConstSlice a = theta.view(ctx.name, "A");
                std::optional<ConstSlice> b;
                if (st.learn_convection) b.emplace(theta.view(ctx.name, "B"));
                const EllipticCoefficients coeffs = diffusion_coeffs(st, a, b ? &*b : nullptr);

                std::vector<FieldState> slices{to_field(x)};
                for (std::size_t s = 0; s < st.n_steps; ++s) slices.push_back(step_explicit(slices.back(), coeffs, grid));

                const std::size_t n = grid.n_points;
                const long nl = static_cast<long>(n);
                const double r = grid.ratio();
                const double k = grid.k;
                const double half_inv_h = 1.0 / (2.0 * grid.h);
                const BoundaryCondition abc = coefficient_bc(grid.bc);
                Slice ga = grad.view(ctx.name, "A");
                Vector gb_local = Vector::Zero(nl);

                Vector g = gy;
                for (std::size_t s = st.n_steps; s-- > 0;) {
                    const FieldState& u = slices[s];
                    Vector gu = Vector::Zero(nl);
                    for (long j = 0; j < nl; ++j) {
                        const double gj = g[j];
                        const GhostSource left = resolve_ghost(j - 1, n, grid.bc);
                        const GhostSource right = resolve_ghost(j + 1, n, grid.bc);
                        const std::size_t al = resolve_ghost(j - 1, n, abc).index;
                        const std::size_t ar = resolve_ghost(j + 1, n, abc).index;
                        const double ul = left.is_index ? u[left.index] : left.value;
                        const double ur = right.is_index ? u[right.index] : right.value;
                        const auto jj = static_cast<std::size_t>(j);

                        gu[j] += gj * (1.0 - 2.0 * r * a[j]);
                        ga[j] += gj * (-2.0 * r * u[jj]);
                        ga[static_cast<Eigen::Index>(al)] += gj * r * ul;
                        ga[static_cast<Eigen::Index>(ar)] += gj * r * ur;
                        if (left.is_index) gu[static_cast<Eigen::Index>(left.index)] += gj * r * a[static_cast<Eigen::Index>(al)];
                        if (right.is_index) gu[static_cast<Eigen::Index>(right.index)] += gj * r * a[static_cast<Eigen::Index>(ar)];

                        if (st.learn_convection) {
                            const double bj = (*b)[j];
                            gb_local[j] += gj * k * (ur - ul) * half_inv_h;
                            if (left.is_index) gu[static_cast<Eigen::Index>(left.index)] -= gj * k * bj * half_inv_h;
                            if (right.is_index) gu[static_cast<Eigen::Index>(right.index)] += gj * k * bj * half_inv_h;
                        }
                        if (st.reaction.kind != ReactionKind::none) {
                            gu[j] += gj * k * st.reaction.derivative(u[jj], jj);
                        }
                    }
                    g = std::move(gu);
                }
                if (st.learn_convection) grad.view(ctx.name, "B") += gb_local;
                return g;
            }
        },
        ctx.stage);
}

} // namespace

Vector Pipeline::forward(const ThetaVector& theta, const Vector& input) const {
    if (theta.size() != layout_.total()) throw ShapeError("theta size does not match the pipeline layout");
    if (!stages_.empty() && static_cast<std::size_t>(input.size()) != input_size()) {
        throw ShapeError("pipeline expects " + std::to_string(input_size()) + " inputs, got " +
                         std::to_string(input.size()));
    }
    Vector x = input;
    for (std::size_t i = 0; i < stages_.size(); ++i) x = forward_stage({stages_[i], names_[i]}, theta, x);
    return x;
}

Vector Pipeline::vjp(const ThetaVector& theta, const Vector& input, const Vector& grad_output) const {
    if (theta.size() != layout_.total()) throw ShapeError("theta size does not match the pipeline layout");
    std::vector<Vector> inputs;
    inputs.reserve(stages_.size());
    Vector x = input;
    for (std::size_t i = 0; i < stages_.size(); ++i) {
        inputs.push_back(x);
        x = forward_stage({stages_[i], names_[i]}, theta, x);
    }
    if (grad_output.size() != x.size()) throw ShapeError("vjp: output gradient size mismatch");
    ThetaVector grad{Vector::Zero(theta.values.size()), layout_};
    Vector g = grad_output;
    for (std::size_t i = stages_.size(); i-- > 0;) {
        g = backward_stage({stages_[i], names_[i]}, theta, inputs[i], g, grad);
    }
    return grad.values;
}

Matrix Pipeline::jacobian(const ThetaVector& theta, const Vector& input) const {
    const Vector out = forward(theta, input);
    Matrix j(out.size(), theta.values.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        j.row(i) = vjp(theta, input, Vector::Unit(out.size(), i)).transpose();
    }
    return j;
}

void Pipeline::check_stability(const ThetaVector& theta) const {
    for (std::size_t i = 0; i < stages_.size(); ++i) {
        const auto* st = std::get_if<DiffusionStage>(&stages_[i]);
        if (!st) continue;
        const ConstSlice a = theta.view(names_[i], "A");
        const EllipticCoefficients c = diffusion_coeffs(*st, a, nullptr);
        const Stability s = cfl_check(c, st->grid);
        if (!s.stable) {
            throw std::invalid_argument("diffusion stage " + std::to_string(i) + " is unstable: r*max(A) = " +
                                        std::to_string(s.max_r_a) + " (limit " + std::to_string(s.limit) +
                                        ", A must be >= 0)");
        }
    }
}

std::vector<AnyBlock> Pipeline::to_blocks(const ThetaVector& theta) const {
    std::vector<AnyBlock> out;
    for (std::size_t i = 0; i < stages_.size(); ++i) {
        std::visit(
            [&](const auto& st) {
                using T = std::decay_t<decltype(st)>;
                if constexpr (std::is_same_v<T, DenseStage>) {
                    const ConstSlice w = theta.view(names_[i], "W");
                    Matrix wm = Eigen::Map<const RowMajorMatrix>(w.data(), static_cast<Eigen::Index>(st.outputs),
                                                                 static_cast<Eigen::Index>(st.inputs));
                    out.push_back(gen_dense(std::move(wm), theta.view(names_[i], "b"), st.activation));
                } else if constexpr (std::is_same_v<T, Conv1DStage>) {
                    const ConstSlice k = theta.view(names_[i], "kernels");
                    const ConstSlice bias = theta.view(names_[i], "bias");
                    Conv1DBlock blk;
                    blk.bc = st.bc;
                    blk.activation = st.reaction;
                    blk.reaction_step = st.reaction_step;
                    for (std::size_t j = 0; j < st.n; ++j) {
                        const auto jj = static_cast<Eigen::Index>(3 * j);
                        blk.kernels.push_back({k[jj], k[jj + 1], k[jj + 2]});
                        blk.bias.push_back(bias[static_cast<Eigen::Index>(j)]);
                    }
                    out.push_back(std::move(blk));
                } else {
                    const ConstSlice a = theta.view(names_[i], "A");
                    std::optional<ConstSlice> b;
                    if (st.learn_convection) b.emplace(theta.view(names_[i], "B"));
                    // one generated conv block per unrolled step; the steps share coefficients
                    const EllipticCoefficients c = diffusion_coeffs(st, a, b ? &*b : nullptr);
                    const Conv1DBlock blk = gen_conv1d(c, st.grid);
                    for (std::size_t s = 0; s < st.n_steps; ++s) out.push_back(blk);
                }
            },
            stages_[i]);
    }
    return out;
}

double pipeline_loss(const Pipeline& model, const Sample& sample, const LossSpec& loss, const ThetaVector& theta) {
    const Vector out = model.forward(theta, sample.input);
    return l2_loss(out, sample.target, theta.values, loss.decay()).loss;
}

Vector pipeline_gradient(const Pipeline& model, const Sample& sample, const LossSpec& loss, const ThetaVector& theta) {
    const Vector out = model.forward(theta, sample.input);
    const LossValue lv = l2_loss(out, sample.target, theta.values, loss.decay());
    return model.vjp(theta, sample.input, lv.grad_output) + loss.decay() * theta.values;
}

double dataset_loss(const Pipeline& model, const std::vector<Sample>& samples, const LossSpec& loss,
                    const ThetaVector& theta) {
    double total = 0.5 * loss.decay() * theta.values.squaredNorm();
    for (const auto& s : samples) total += 0.5 * (model.forward(theta, s.input) - s.target).squaredNorm();
    return total;
}

LossAndGradient dataset_loss_and_gradient(const Pipeline& model, const std::vector<Sample>& samples,
                                          const LossSpec& loss, const ThetaVector& theta) {
    LossAndGradient out;
    out.loss = 0.5 * loss.decay() * theta.values.squaredNorm();
    out.gradient = loss.decay() * theta.values;
    for (const auto& s : samples) {
        const Vector y = model.forward(theta, s.input);
        if (y.size() != s.target.size()) throw ShapeError("sample target size does not match the pipeline output");
        const Vector r = y - s.target;
        out.loss += 0.5 * r.squaredNorm();
        out.gradient += model.vjp(theta, s.input, r);
    }
    return out;
}

} // namespace npde
