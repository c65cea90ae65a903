#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "npde/optim.hpp"
#include "npde/pipeline.hpp"

namespace npde {

struct Dataset {
    std::vector<Sample> samples;
    /// Trailing fraction of samples held out for validation.
    double validation_fraction = 0.0;

    std::vector<Sample> training() const;
    std::vector<Sample> validation() const;
    /// Throws unless every sample has `n_inputs` inputs, `n_targets` targets
    /// and at least one sample is left for training.
    void validate(std::size_t n_inputs, std::size_t n_targets) const;

    /// CSV rows: the first `n_inputs` columns are the input, the rest the target.
    static Dataset from_csv(const std::filesystem::path& path, std::size_t n_inputs);
};

enum class OptimizerKind { sgd, adam, newton, gauss_newton, lbfgs };

std::string to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(const std::string& name);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double eta = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::size_t memory = 10;

    void validate() const;
};

enum class StopReason { target_loss, max_epochs, divergence };
std::string to_string(StopReason reason);

struct TrainReport {
    /// Objective after each epoch's update (or the initial value when the
    /// target was already met and no update ran).
    std::vector<double> loss_curve;
    /// Running minimum of loss_curve.
    std::vector<double> best_loss;
    ThetaVector final_theta;
    bool converged = false;
    StopReason stop_reason = StopReason::max_epochs;
    std::optional<double> validation_loss;

    std::size_t epochs() const { return loss_curve.size(); }
    double final_loss() const { return loss_curve.empty() ? 0.0 : loss_curve.back(); }
};

struct TrainOptions {
    std::uint64_t seed = 0;
    std::size_t max_epochs = 1000;
    double target_loss = 0.0;
    /// Start from this θ instead of a seeded random draw.
    std::optional<ThetaVector> initial_theta;
};

/// Losses above this count as divergence.
inline constexpr double kLossDivergence = 1e12;

/// Full-batch supervised loop: draw θ from the seed, then per epoch solve
/// forward, take one optimizer step on Σ½‖f(x) − t‖² + ½ decay ‖θ‖², and stop
/// once the loss reaches `target_loss` or `max_epochs` run out. If the initial
/// θ already meets the target the loop returns after one epoch without updating.
/// Non-finite or runaway losses stop with StopReason::divergence and the last finite θ.
TrainReport train_supervised(const Pipeline& model, const Dataset& data, const LossSpec& loss,
                             const OptimizerConfig& opt, const TrainOptions& options);

/// "epoch,loss" header then one row per epoch (1-based).
void write_loss_curve_csv(std::ostream& out, const TrainReport& report);
/// epochs=<n> loss=<x> converged=<bool>
std::string summary_line(const TrainReport& report);

} // namespace npde
