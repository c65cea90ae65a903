#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "npde/blocks.hpp"

namespace npde {

using AnyBlock = std::variant<Conv1DBlock, Conv2DBlock, DenseBlock, RNNCell, RBMEnergy>;

/// "conv1d", "conv2d", "dense", "rnn" or "rbm"
std::string block_kind(const AnyBlock& block);

/// JSON text: {"kind": ..., "shape": [...], row-major weight arrays, "activation": {...}}.
/// Doubles are written in shortest round-trip form, so load(save(b)) == b bit for bit.
std::string serialize_block(const AnyBlock& block);
AnyBlock deserialize_block(const std::string& text);

/// {"blocks": [...]} for a stack of blocks.
std::string serialize_blocks(const std::vector<AnyBlock>& blocks);
std::vector<AnyBlock> deserialize_blocks(const std::string& text);

void save_block(const std::filesystem::path& path, const AnyBlock& block);
AnyBlock load_block(const std::filesystem::path& path);

} // namespace npde
