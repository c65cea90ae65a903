#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "npde/block_io.hpp"
#include "npde/blocks.hpp"
#include "npde/linalg.hpp"
#include "npde/optim.hpp"
#include "npde/solver.hpp"

namespace npde {

/// Learnable dense layer: tensors "W" (outputs x inputs, row-major) and "b".
struct DenseStage {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    ReactionSpec activation;
};

/// Learnable locally connected conv: tensors "kernels" (n x 3) and "bias" (n).
struct Conv1DStage {
    std::size_t n = 0;
    BoundaryCondition bc;
    ReactionSpec reaction;
    double reaction_step = 0.0;
};

/// `n_steps` explicit solver steps with learnable diffusion "A" (and
/// convection "B" when `learn_convection`).
struct DiffusionStage {
    GridSpec grid;
    std::size_t n_steps = 1;
    ReactionSpec reaction;
    bool learn_convection = false;
};

using Stage = std::variant<DenseStage, Conv1DStage, DiffusionStage>;

struct Sample {
    Vector input;
    Vector target;
};

/// A chain of stages whose parameters live in one flat θ. Gradients are
/// exact for the discrete computation, obtained by reverse accumulation
/// through every stage (and every unrolled solver step).
class Pipeline {
public:
    Pipeline() = default;
    /// Rejects mismatched stage sizes and activations outside
    /// {none, sigmoid, fisher, linear}.
    explicit Pipeline(std::vector<Stage> stages);

    const std::vector<Stage>& stages() const { return stages_; }
    bool empty() const { return stages_.empty(); }
    /// 0 for an empty pipeline (any size passes through).
    std::size_t input_size() const;
    std::size_t output_size() const;

    const ThetaLayout& layout() const { return layout_; }
    /// Uniform in ±1/sqrt(fan_in) per tensor; diffusion coefficients are drawn
    /// from [0, min(1/sqrt(3), 0.45/r)] so the explicit steps start stable.
    ThetaVector init_theta(std::uint64_t seed) const;

    Vector forward(const ThetaVector& theta, const Vector& input) const;
    /// dθ of <grad_output, forward(θ, input)>.
    Vector vjp(const ThetaVector& theta, const Vector& input, const Vector& grad_output) const;
    /// d forward / dθ, output_size x θ size.
    Matrix jacobian(const ThetaVector& theta, const Vector& input) const;

    /// Throws std::invalid_argument when θ makes an explicit diffusion stage
    /// violate the CFL bound.
    void check_stability(const ThetaVector& theta) const;

    std::vector<AnyBlock> to_blocks(const ThetaVector& theta) const;

private:
    std::vector<Stage> stages_;
    ThetaLayout layout_;
    std::vector<std::string> names_;
};

/// ½‖forward(θ, x) − t‖² + ½ decay ‖θ‖² for one sample.
double pipeline_loss(const Pipeline& model, const Sample& sample, const LossSpec& loss, const ThetaVector& theta);
/// Exact gradient of pipeline_loss w.r.t. θ.
Vector pipeline_gradient(const Pipeline& model, const Sample& sample, const LossSpec& loss, const ThetaVector& theta);

struct LossAndGradient {
    double loss = 0.0;
    Vector gradient;
};

/// Full-batch objective Σ_samples ½‖f(x) − t‖² + ½ decay ‖θ‖², summed in sample order.
double dataset_loss(const Pipeline& model, const std::vector<Sample>& samples, const LossSpec& loss,
                    const ThetaVector& theta);
LossAndGradient dataset_loss_and_gradient(const Pipeline& model, const std::vector<Sample>& samples,
                                          const LossSpec& loss, const ThetaVector& theta);

} // namespace npde
