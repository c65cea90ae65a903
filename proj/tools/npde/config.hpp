#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "npde/block_io.hpp"
#include "npde/grid.hpp"
#include "npde/optim.hpp"
#include "npde/pipeline.hpp"
#include "npde/solver.hpp"
#include "npde/stencil.hpp"
#include "npde/train.hpp"

namespace npde::cli {

/// Any problem with a config file: syntax, unknown or missing keys, values
/// that violate a module precondition, unreadable referenced files.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Overrides {
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
};

struct SolveConfig {
    GridSpec grid;
    bool two_component = false;
    EllipticCoefficients coeffs;
    double du = 0.0, dv = 0.0, feed = 0.0, kill = 0.0;
    FieldState initial;
    TwoComponentState initial_pair;
    std::size_t n_steps = 1;
    Scheme scheme = Scheme::explicit_euler;
    std::size_t frame_stride = 1;
    bool write_frames = true;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir;
};

struct TrainConfig {
    Pipeline model;
    Dataset data;
    std::filesystem::path data_path;
    LossSpec loss;
    OptimizerConfig optimizer;
    TrainOptions options;
    std::filesystem::path out_dir;
};

struct GenBlockConfig {
    AnyBlock block;
    std::string file_name = "block.json";
    std::filesystem::path out_dir;
};

struct VerifyConfig {
    std::string suite = "all";
};

/// Output directory precedence: NPDE_OUT, then --out, then io.output_dir, then ".".
std::filesystem::path resolve_out_dir(const std::optional<std::string>& from_config, const Overrides& ov);

SolveConfig load_solve_config(const std::filesystem::path& path, const Overrides& ov);
TrainConfig load_train_config(const std::filesystem::path& path, const Overrides& ov);
GenBlockConfig load_gen_block_config(const std::filesystem::path& path, const Overrides& ov);
VerifyConfig load_verify_config(const std::filesystem::path& path);

} // namespace npde::cli
