#include <filesystem>

#include "helpers.hpp"
#include "npde/block_io.hpp"

using namespace npde;

namespace {

std::vector<AnyBlock> sample_blocks() {
    std::mt19937_64 rng(21);
    const GridSpec g = make_grid(5, 0.3, 0.01, BoundaryCondition::mirror());
    EllipticCoefficients c;
    c.a = npde::test::random_values(rng, 5, 0.1, 1.0);
    c.b.assign(5, 0.0);
    c.reaction = ReactionSpec::fisher(0.123456789);
    std::vector<AnyBlock> out;
    out.emplace_back(gen_conv1d(c, g));
    out.emplace_back(gen_conv2d(laplacian_2d_5pt().scaled(0.1), 3, BoundaryCondition::dirichlet(0.5)));
    out.emplace_back(gen_dense(npde::test::random_matrix(rng, 2, 3), npde::test::random_vector(rng, 2),
                               ReactionSpec::sigmoid(1.0 / 3.0)));
    out.emplace_back(gen_rnn_cell(0.1, 0.2, 1.3, g));
    out.emplace_back(gen_rbm(c, g, npde::test::random_vector(rng, 5), npde::test::random_vector(rng, 5)));
    return out;
}

} // namespace

TEST(BlockIo, RoundTripIsByteIdentical) {
    for (const AnyBlock& b : sample_blocks()) {
        const std::string once = serialize_block(b);
        const std::string twice = serialize_block(deserialize_block(once));
        EXPECT_EQ(once, twice) << block_kind(b);
        EXPECT_EQ(block_kind(deserialize_block(once)), block_kind(b));
    }
}

TEST(BlockIo, DenseWeightsSurviveBitForBit) {
    const auto blocks = sample_blocks();
    const auto& d = std::get<DenseBlock>(blocks[2]);
    const auto back = std::get<DenseBlock>(deserialize_block(serialize_block(d)));
    EXPECT_EQ(back.w, d.w);
    EXPECT_EQ(back.bias, d.bias);
    EXPECT_EQ(back.activation, d.activation);
}

TEST(BlockIo, StackRoundTrip) {
    const auto blocks = sample_blocks();
    const std::string text = serialize_blocks(blocks);
    EXPECT_EQ(serialize_blocks(deserialize_blocks(text)), text);
    EXPECT_EQ(deserialize_blocks(text).size(), blocks.size());
}

TEST(BlockIo, FileRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "npde_block_io_test";
    std::filesystem::create_directories(dir);
    for (const AnyBlock& b : sample_blocks()) {
        const auto p = dir / (block_kind(b) + ".json");
        save_block(p, b);
        EXPECT_EQ(serialize_block(load_block(p)), serialize_block(b));
    }
    std::filesystem::remove_all(dir);
}

TEST(BlockIo, RejectsMalformedInput) {
    EXPECT_ANY_THROW(deserialize_block("not json"));
    EXPECT_ANY_THROW(deserialize_block(R"({"kind": "lstm"})"));
    EXPECT_ANY_THROW(deserialize_block(R"({"kind": "dense", "shape": [2, 2], "w": [1, 2, 3], "bias": [0, 0]})"));
}
