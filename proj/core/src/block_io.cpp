#include "npde/block_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace npde {

namespace {

using nlohmann::json;

json matrix_json(const Matrix& m) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
    }
    return arr;
}

Matrix matrix_from(const json& arr, Eigen::Index rows, Eigen::Index cols) {
    if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != rows * cols) {
        throw std::invalid_argument("block file: weight array does not match its shape");
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = arr.at(static_cast<std::size_t>(i * cols + j)).get<double>();
    }
    return m;
}

json vector_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vector vector_from(const json& arr) {
    const auto values = arr.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json reaction_json(const ReactionSpec& r) {
    json j{{"kind", to_string(r.kind)}, {"rate", r.rate}};
    if (r.kind == ReactionKind::source) j["values"] = r.values;
    return j;
}

ReactionSpec reaction_from(const json& j) {
    ReactionSpec r;
    r.kind = parse_reaction_kind(j.at("kind").get<std::string>());
    r.rate = j.value("rate", 0.0);
    if (r.kind == ReactionKind::source) r.values = j.at("values").get<std::vector<double>>();
    return r;
}

json bc_json(const BoundaryCondition& bc) { return json{{"kind", to_string(bc.kind)}, {"value", bc.value}}; }

BoundaryCondition bc_from(const json& j) {
    return BoundaryCondition{parse_boundary_kind(j.at("kind").get<std::string>()), j.value("value", 0.0)};
}

std::pair<Eigen::Index, Eigen::Index> shape_from(const json& j) {
    const auto s = j.at("shape").get<std::vector<long>>();
    if (s.size() != 2 || s[0] < 0 || s[1] < 0) throw std::invalid_argument("block file: shape must be [rows, cols]");
    return {s[0], s[1]};
}

json to_json(const AnyBlock& block) {
    return std::visit(
        [](const auto& b) -> json {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Conv1DBlock>) {
                json w = json::array();
                for (const auto& k : b.kernels) {
                    for (double t : k) w.push_back(t);
                }
                return json{{"kind", "conv1d"},
                            {"shape", {b.kernels.size(), 3}},
                            {"weights", w},
                            {"bias", b.bias},
                            {"bc", bc_json(b.bc)},
                            {"activation", reaction_json(b.activation)},
                            {"reaction_step", b.reaction_step}};
            } else if constexpr (std::is_same_v<T, Conv2DBlock>) {
                json w = json::array();
                for (const auto& row : b.kernel.taps) {
                    for (double t : row) w.push_back(t);
                }
                return json{{"kind", "conv2d"},
                            {"shape", {3, 3}},
                            {"weights", w},
                            {"channels_in", b.channels_in},
                            {"channels_out", b.channels_out},
                            {"bc", bc_json(b.bc)},
                            {"activation", reaction_json(b.activation)},
                            {"reaction_step", b.reaction_step}};
            } else if constexpr (std::is_same_v<T, DenseBlock>) {
                return json{{"kind", "dense"},
                            {"shape", {b.w.rows(), b.w.cols()}},
                            {"weights", matrix_json(b.w)},
                            {"bias", vector_json(b.bias)},
                            {"activation", reaction_json(b.activation)}};
            } else if constexpr (std::is_same_v<T, RNNCell>) {
                return json{{"kind", "rnn"},
                            {"shape", {b.w1.rows(), b.w1.cols()}},
                            {"w1", matrix_json(b.w1)},
                            {"w2", matrix_json(b.w2)},
                            {"u", matrix_json(b.u)},
                            {"transverse_laplacian", matrix_json(b.transverse_laplacian)},
                            {"constants", {{"dxy", b.dxy}, {"dz", b.dz}, {"v", b.speed}, {"h", b.h}, {"k", b.k}}},
                            {"activation", reaction_json(ReactionSpec::none())}};
            } else {
                return json{{"kind", "rbm"},
                            {"shape", {b.w.rows(), b.w.cols()}},
                            {"weights", matrix_json(b.w)},
                            {"b", vector_json(b.b)},
                            {"c", vector_json(b.c)},
                            {"activation", reaction_json(ReactionSpec::none())}};
            }
        },
        block);
}

AnyBlock from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const auto [rows, cols] = shape_from(j);
    if (kind == "conv1d") {
        if (cols != 3) throw std::invalid_argument("block file: conv1d kernels must have 3 taps");
        Conv1DBlock b;
        const Matrix w = matrix_from(j.at("weights"), rows, 3);
        b.kernels.resize(static_cast<std::size_t>(rows));
        for (Eigen::Index i = 0; i < rows; ++i) b.kernels[static_cast<std::size_t>(i)] = {w(i, 0), w(i, 1), w(i, 2)};
        b.bias = j.at("bias").get<std::vector<double>>();
        b.bc = bc_from(j.at("bc"));
        b.activation = reaction_from(j.at("activation"));
        b.reaction_step = j.at("reaction_step").get<double>();
        return b;
    }
    if (kind == "conv2d") {
        if (rows != 3 || cols != 3) throw std::invalid_argument("block file: conv2d kernel must be 3x3");
        Conv2DBlock b;
        const Matrix w = matrix_from(j.at("weights"), 3, 3);
        for (int a = 0; a < 3; ++a) {
            for (int c = 0; c < 3; ++c) b.kernel.taps[a][c] = w(a, c);
        }
        b.channels_in = j.at("channels_in").get<std::size_t>();
        b.channels_out = j.at("channels_out").get<std::size_t>();
        b.bc = bc_from(j.at("bc"));
        b.activation = reaction_from(j.at("activation"));
        b.reaction_step = j.at("reaction_step").get<double>();
        return b;
    }
    if (kind == "dense") {
        return gen_dense(matrix_from(j.at("weights"), rows, cols), vector_from(j.at("bias")),
                         reaction_from(j.at("activation")));
    }
    if (kind == "rnn") {
        RNNCell c;
        c.w1 = matrix_from(j.at("w1"), rows, cols);
        c.w2 = matrix_from(j.at("w2"), rows, cols);
        c.u = matrix_from(j.at("u"), rows, cols);
        c.transverse_laplacian = matrix_from(j.at("transverse_laplacian"), rows, cols);
        const json& k = j.at("constants");
        c.dxy = k.at("dxy").get<double>();
        c.dz = k.at("dz").get<double>();
        c.speed = k.at("v").get<double>();
        c.h = k.at("h").get<double>();
        c.k = k.at("k").get<double>();
        return c;
    }
    if (kind == "rbm") {
        return RBMEnergy{matrix_from(j.at("weights"), rows, cols), vector_from(j.at("b")), vector_from(j.at("c"))};
    }
    throw std::invalid_argument("block file: unknown block kind '" + kind + "'");
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("block file: ") + e.what());
    }
}

} // namespace

std::string block_kind(const AnyBlock& block) {
    static constexpr const char* names[] = {"conv1d", "conv2d", "dense", "rnn", "rbm"};
    return names[block.index()];
}

std::string serialize_block(const AnyBlock& block) { return to_json(block).dump(2) + "\n"; }

AnyBlock deserialize_block(const std::string& text) {
    try {
        return from_json(parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("block file: ") + e.what());
    }
}

std::string serialize_blocks(const std::vector<AnyBlock>& blocks) {
    json arr = json::array();
    for (const auto& b : blocks) arr.push_back(to_json(b));
    return json{{"blocks", arr}}.dump(2) + "\n";
}

std::vector<AnyBlock> deserialize_blocks(const std::string& text) {
    try {
        const json j = parse(text);
        std::vector<AnyBlock> out;
        for (const auto& b : j.at("blocks")) out.push_back(from_json(b));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("block file: ") + e.what());
    }
}

void save_block(const std::filesystem::path& path, const AnyBlock& block) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << serialize_block(block);
}

AnyBlock load_block(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_block(ss.str());
}

} // namespace npde
