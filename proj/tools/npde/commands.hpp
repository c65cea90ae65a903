#pragma once

#include <ostream>

#include "config.hpp"

namespace npde::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kSolverDivergence = 2,
    kTrainingFailure = 3,
    kVerifyFailure = 4,
};

/// Writes trajectory.csv (or trajectory_u.csv / trajectory_v.csv), final.csv
/// and, for 2D runs, one PGM per frame_stride steps. Prints the final-slice summary.
int cmd_solve(const SolveConfig& config, std::ostream& out, std::ostream& err);

/// Writes loss_curve.csv and blocks.json, prints the summary line.
/// Exit 0 only if the target loss was reached.
int cmd_train(const TrainConfig& config, std::ostream& out, std::ostream& err);

int cmd_gen_block(const GenBlockConfig& config, std::ostream& out, std::ostream& err);

int cmd_verify(const VerifyConfig& config, std::ostream& out, std::ostream& err);

} // namespace npde::cli
