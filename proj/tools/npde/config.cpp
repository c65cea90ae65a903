#include "config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "npde/io.hpp"

namespace npde::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// Object view that remembers which keys were read so leftovers can be
// reported as typos.
class Obj {
public:
    Obj(const json& j, std::string where) : j_(&j), where_(std::move(where)) {
        if (!j.is_object()) throw ConfigError(where_ + ": expected an object");
    }

    const std::string& where() const { return where_; }
    bool has(const std::string& key) const { return j_->contains(key); }

    const json& raw(const std::string& key) {
        if (!has(key)) throw ConfigError(where_ + ": missing required key '" + key + "'");
        used_.insert(key);
        return j_->at(key);
    }

    Obj obj(const std::string& key) { return Obj(raw(key), where_ + "." + key); }

    double num(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(where_ + "." + key + ": expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(where_ + "." + key + ": must be finite");
        return x;
    }
    double num(const std::string& key, double fallback) { return has(key) ? num(key) : fallback; }

    std::size_t count(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ConfigError(where_ + "." + key + ": expected a non-negative integer");
        }
        return v.get<std::size_t>();
    }
    std::size_t count(const std::string& key, std::size_t fallback) { return has(key) ? count(key) : fallback; }

    std::string str(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(where_ + "." + key + ": expected a string");
        return v.get<std::string>();
    }
    std::string str(const std::string& key, const std::string& fallback) { return has(key) ? str(key) : fallback; }

    bool flag(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(where_ + "." + key + ": expected true or false");
        return v.get<bool>();
    }

    void done() const {
        for (const auto& [key, _] : j_->items()) {
            if (!used_.count(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
        }
    }

private:
    const json* j_;
    std::string where_;
    std::set<std::string> used_;
};

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
}

fs::path relative_to(const fs::path& config, const std::string& p) {
    const fs::path candidate(p);
    return candidate.is_absolute() ? candidate : config.parent_path() / candidate;
}

std::vector<double> number_array(const json& v, const std::string& where) {
    if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (x.is_array()) {
            auto row = number_array(x, where);
            out.insert(out.end(), row.begin(), row.end());
        } else if (x.is_number()) {
            out.push_back(x.get<double>());
        } else {
            throw ConfigError(where + ": expected an array of numbers");
        }
    }
    return out;
}

Matrix matrix_rows(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a non-empty array of rows");
    const std::size_t rows = v.size();
    const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        const auto row = number_array(v[i], where);
        if (!v[i].is_array() || row.size() != cols || cols == 0) throw ConfigError(where + ": ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
    return m;
}

GridSpec parse_grid(Obj g) {
    const long dims = static_cast<long>(g.count("dims", 1));
    const std::size_t n = g.count("n_points");
    const double h = g.num("h");
    const double k = g.num("k");
    BoundaryCondition bc;
    try {
        bc.kind = parse_boundary_kind(g.str("bc"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(g.where() + ".bc: " + e.what());
    }
    bc.value = g.num("bc_value", 0.0);
    g.done();
    if (dims != 1 && dims != 2) throw ConfigError(g.where() + ".dims: must be 1 or 2");
    try {
        return make_grid(n, h, k, bc, static_cast<int>(dims));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(g.where() + ": " + e.what());
    }
}

std::vector<double> parse_coefficient(Obj& parent, const std::string& key, const GridSpec& grid, double fallback) {
    const std::string where = parent.where() + "." + key;
    if (!parent.has(key)) return std::vector<double>(grid.size(), fallback);
    const json& v = parent.raw(key);
    if (v.is_number()) return std::vector<double>(grid.size(), v.get<double>());
    auto values = number_array(v, where);
    if (values.size() != grid.size()) {
        throw ConfigError(where + ": expected " + std::to_string(grid.size()) + " values, got " +
                          std::to_string(values.size()));
    }
    return values;
}

ReactionSpec parse_reaction(const json& v, const std::string& where, std::size_t n_nodes) {
    ReactionSpec spec;
    try {
        if (v.is_string()) {
            spec.kind = parse_reaction_kind(v.get<std::string>());
            if (spec.kind == ReactionKind::source) throw ConfigError(where + ": a source term needs 'values'");
            spec.rate = spec.kind == ReactionKind::none ? 0.0 : 1.0;
        } else {
            Obj o(v, where);
            spec.kind = parse_reaction_kind(o.str("kind"));
            spec.rate = o.num("rate", spec.kind == ReactionKind::none ? 0.0 : 1.0);
            if (o.has("values")) spec.values = number_array(o.raw("values"), where + ".values");
            o.done();
        }
        spec.validate(n_nodes);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return spec;
}

ReactionSpec parse_reaction(Obj& parent, const std::string& key, std::size_t n_nodes) {
    if (!parent.has(key)) return ReactionSpec::none();
    return parse_reaction(parent.raw(key), parent.where() + "." + key, n_nodes);
}

EllipticCoefficients parse_coefficients(Obj m, const GridSpec& grid) {
    EllipticCoefficients c;
    c.a = parse_coefficient(m, "A", grid, 0.0);
    c.b = parse_coefficient(m, "B", grid, 0.0);
    c.reaction = parse_reaction(m, "reaction", grid.size());
    const std::string lap = m.str("laplacian", "nine_point");
    if (lap == "nine_point") {
        c.laplacian = Laplacian2D::nine_point;
    } else if (lap == "five_point") {
        c.laplacian = Laplacian2D::five_point;
    } else {
        throw ConfigError(m.where() + ".laplacian: expected five_point or nine_point");
    }
    m.done();
    try {
        c.validate(grid);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(m.where() + ": " + e.what());
    }
    return c;
}

double node_x(const GridSpec& grid, double origin, std::size_t i) { return origin + grid.h * static_cast<double>(i); }

FieldState parse_initial(Obj o, const GridSpec& grid, std::uint64_t seed, const fs::path& config_path) {
    const std::string kind = o.str("kind");
    const std::size_t n = grid.n_points;
    std::vector<double> values(grid.size(), 0.0);
    if (kind == "constant") {
        values.assign(grid.size(), o.num("value"));
    } else if (kind == "values") {
        values = number_array(o.raw("values"), o.where() + ".values");
        if (values.size() != grid.size()) {
            throw ConfigError(o.where() + ".values: expected " + std::to_string(grid.size()) + " entries");
        }
    } else if (kind == "gaussian") {
        const double amp = o.num("amplitude", 1.0), center = o.num("center", 0.0), s2 = o.num("sigma2", 1.0);
        const double origin = o.num("origin", 0.0);
        if (!(s2 > 0.0)) throw ConfigError(o.where() + ".sigma2: must be positive");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = node_x(grid, origin, grid.dims == 1 ? i : i % n) - center;
            const double y = grid.dims == 1 ? 0.0 : node_x(grid, origin, i / n) - center;
            values[i] = amp * std::exp(-(x * x + y * y) / (2.0 * s2));
        }
    } else if (kind == "step") {
        const double pos = o.num("position"), left = o.num("left", 1.0), right = o.num("right", 0.0);
        const double origin = o.num("origin", 0.0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            values[i] = node_x(grid, origin, grid.dims == 1 ? i : i % n) < pos ? left : right;
        }
    } else if (kind == "random") {
        const double lo = o.num("low", 0.0), hi = o.num("high", 1.0);
        if (!(lo < hi)) throw ConfigError(o.where() + ": low must be below high");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(lo, hi);
        for (double& v : values) v = dist(rng);
    } else if (kind == "csv") {
        const fs::path p = relative_to(config_path, o.str("path"));
        std::ifstream in(p);
        if (!in) throw ConfigError(o.where() + ".path: cannot open '" + p.string() + "'");
        FieldState f;
        try {
            f = read_field_csv(in);
        } catch (const std::exception& e) {
            throw ConfigError(o.where() + ".path: '" + p.string() + "': " + e.what());
        }
        if (!f.matches(grid)) throw ConfigError(o.where() + ".path: field in '" + p.string() + "' does not match the grid");
        o.done();
        return f;
    } else {
        throw ConfigError(o.where() + ".kind: unknown initial condition '" + kind + "'");
    }
    o.done();
    try {
        return FieldState::from_values(grid, std::move(values));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(o.where() + ": " + e.what());
    }
}

TwoComponentState parse_initial_pair(Obj o, const GridSpec& grid, std::uint64_t seed) {
    const std::string kind = o.str("kind");
    const std::size_t n = grid.n_points;
    std::vector<double> u(grid.size(), o.num("u", 1.0)), v(grid.size(), o.num("v", 0.0));
    if (kind == "patch") {
        const std::size_t size = o.count("size", 10);
        const double noise = o.num("noise", 0.01);
        const double u_in = o.num("u_inside", 0.5), v_in = o.num("v_inside", 0.25);
        if (size > n) throw ConfigError(o.where() + ".size: patch larger than the grid");
        if (!(noise >= 0.0)) throw ConfigError(o.where() + ".noise: must be >= 0");
        const std::size_t lo = n / 2 - size / 2, hi = lo + size;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-noise, noise);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t idx = i * n + j;
                if (i >= lo && i < hi && j >= lo && j < hi) {
                    u[idx] = u_in;
                    v[idx] = v_in;
                }
                if (noise > 0.0) {
                    u[idx] += dist(rng);
                    v[idx] += dist(rng);
                }
            }
        }
    } else if (kind != "constant") {
        throw ConfigError(o.where() + ".kind: unknown two-component initial condition '" + kind + "'");
    }
    o.done();
    return {FieldState(2, n, std::move(u)), FieldState(2, n, std::move(v))};
}

std::optional<std::string> parse_io(json& root, const std::string& where) {
    if (!root.contains("io")) return std::nullopt;
    Obj io(root["io"], where + ".io");
    std::optional<std::string> dir;
    if (io.has("output_dir")) dir = io.str("output_dir");
    io.done();
    return dir;
}

template <typename F>
auto guarded(const fs::path& path, F&& body) {
    try {
        return body();
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

ReactionSpec parse_activation(Obj& o, const std::string& key, std::size_t n) {
    return o.has(key) ? parse_reaction(o.raw(key), o.where() + "." + key, n) : ReactionSpec::none();
}

Stage parse_stage(Obj s, std::size_t index) {
    const std::string type = s.str("type");
    Stage out;
    if (type == "dense") {
        DenseStage d;
        d.inputs = s.count("inputs");
        d.outputs = s.count("outputs");
        d.activation = parse_activation(s, "activation", d.outputs);
        out = d;
    } else if (type == "conv1d") {
        Conv1DStage c;
        c.n = s.count("n");
        try {
            c.bc.kind = parse_boundary_kind(s.str("bc"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(s.where() + ".bc: " + e.what());
        }
        c.bc.value = s.num("bc_value", 0.0);
        c.reaction = parse_activation(s, "reaction", c.n);
        c.reaction_step = s.num("reaction_step", 0.0);
        out = c;
    } else if (type == "diffusion") {
        DiffusionStage d;
        d.grid = parse_grid(s.obj("grid"));
        d.n_steps = s.count("n_steps", 1);
        d.reaction = parse_activation(s, "reaction", d.grid.size());
        d.learn_convection = s.flag("learn_convection", false);
        out = d;
    } else {
        throw ConfigError(s.where() + ".type: unknown stage type '" + type + "' (stage " + std::to_string(index) + ")");
    }
    s.done();
    return out;
}

double parse_target(Obj& t) {
    const json& v = t.raw("target_loss");
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<double>::infinity();
        throw ConfigError(t.where() + ".target_loss: expected a number or \"inf\"");
    }
    if (!v.is_number()) throw ConfigError(t.where() + ".target_loss: expected a number or \"inf\"");
    const double x = v.get<double>();
    if (std::isnan(x)) throw ConfigError(t.where() + ".target_loss: must not be NaN");
    return x;
}

OptimizerConfig parse_optimizer(Obj o) {
    OptimizerConfig c;
    try {
        c.kind = parse_optimizer_kind(o.str("kind", "adam"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(o.where() + ".kind: " + e.what());
    }
    const bool second_order = c.kind == OptimizerKind::newton || c.kind == OptimizerKind::gauss_newton ||
                              c.kind == OptimizerKind::lbfgs;
    c.eta = o.num("eta", second_order ? 1.0 : (c.kind == OptimizerKind::sgd ? 0.01 : 0.001));
    c.beta1 = o.num("beta1", 0.9);
    c.beta2 = o.num("beta2", 0.999);
    c.eps = o.num("eps", 1e-8);
    c.memory = o.count("memory", 10);
    o.done();
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(o.where() + ": " + e.what());
    }
    return c;
}

LossSpec parse_loss(Obj o) {
    LossSpec l;
    const std::string kind = o.str("kind", "l2_decay");
    if (kind == "l2_decay") {
        l.kind = LossKind::l2_decay;
        l.nu = o.num("nu", 0.0);
    } else if (kind == "pde_constrained") {
        l.kind = LossKind::pde_constrained;
        l.beta = o.num("beta", 0.0);
        l.lambda = o.num("lambda", 0.0);
    } else {
        throw ConfigError(o.where() + ".kind: unknown loss '" + kind + "'");
    }
    o.done();
    try {
        l.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(o.where() + ": " + e.what());
    }
    return l;
}

Vector vector_or_zeros(Obj& o, const std::string& key, Eigen::Index n) {
    if (!o.has(key)) return Vector::Zero(n);
    const auto values = number_array(o.raw(key), o.where() + "." + key);
    if (static_cast<Eigen::Index>(values.size()) != n) {
        throw ConfigError(o.where() + "." + key + ": expected " + std::to_string(n) + " values");
    }
    return Eigen::Map<const Vector>(values.data(), n);
}

} // namespace

fs::path resolve_out_dir(const std::optional<std::string>& from_config, const Overrides& ov) {
    if (const char* env = std::getenv("NPDE_OUT"); env && *env) return fs::path(env);
    if (ov.out) return *ov.out;
    if (from_config) return fs::path(*from_config);
    return fs::path(".");
}

SolveConfig load_solve_config(const fs::path& path, const Overrides& ov) {
    return guarded(path, [&] {
        json root = read_json(path);
        Obj top(root, "config");
        SolveConfig c;
        c.grid = parse_grid(top.obj("grid"));

        Obj run = top.obj("run");
        c.n_steps = run.count("n_steps");
        if (c.n_steps < 1) throw ConfigError("config.run.n_steps: must be >= 1");
        const std::string scheme = run.str("scheme", "explicit");
        if (scheme == "explicit") {
            c.scheme = Scheme::explicit_euler;
        } else if (scheme == "implicit") {
            c.scheme = Scheme::implicit_euler;
        } else {
            throw ConfigError("config.run.scheme: expected explicit or implicit");
        }
        c.seed = run.count("seed", 0);
        if (ov.seed) c.seed = *ov.seed;
        c.frame_stride = run.count("frame_stride", 1);
        if (c.frame_stride < 1) throw ConfigError("config.run.frame_stride: must be >= 1");
        c.write_frames = run.flag("frames", true);
        run.done();

        Obj model = top.obj("model");
        const std::string pde = model.str("pde", "diffusion");
        if (pde == "gray_scott") {
            c.two_component = true;
            if (c.grid.dims != 2) throw ConfigError("config.grid.dims: gray_scott needs a 2D grid");
            if (c.scheme != Scheme::explicit_euler) throw ConfigError("config.run.scheme: gray_scott is explicit only");
            c.du = model.num("du");
            c.dv = model.num("dv");
            c.feed = model.num("feed");
            c.kill = model.num("kill");
            if (c.du < 0.0 || c.dv < 0.0) throw ConfigError("config.model: diffusion constants must be >= 0");
            model.done();
            c.initial_pair = parse_initial_pair(top.obj("initial"), c.grid, c.seed);
        } else if (pde == "diffusion") {
            c.coeffs = parse_coefficients(model, c.grid);
            if (c.scheme == Scheme::implicit_euler && (c.grid.dims != 1 || !c.coeffs.convection_free())) {
                throw ConfigError("config.run.scheme: implicit runs need a 1D grid without convection");
            }
            c.initial = parse_initial(top.obj("initial"), c.grid, c.seed, path);
        } else {
            throw ConfigError("config.model.pde: unknown pde '" + pde + "' (expected diffusion or gray_scott)");
        }
        c.out_dir = resolve_out_dir(parse_io(root, "config"), ov);
        if (root.contains("io")) top.raw("io");
        top.done();
        return c;
    });
}

TrainConfig load_train_config(const fs::path& path, const Overrides& ov) {
    return guarded(path, [&] {
        json root = read_json(path);
        Obj top(root, "config");
        TrainConfig c;

        Obj model = top.obj("model");
        const json& stages = model.raw("stages");
        if (!stages.is_array()) throw ConfigError("config.model.stages: expected an array");
        std::vector<Stage> parsed;
        for (std::size_t i = 0; i < stages.size(); ++i) {
            parsed.push_back(parse_stage(Obj(stages[i], "config.model.stages[" + std::to_string(i) + "]"), i));
        }
        model.done();
        c.model = Pipeline(std::move(parsed));

        c.loss = top.has("loss") ? parse_loss(top.obj("loss")) : LossSpec{};
        c.optimizer = top.has("optimizer") ? parse_optimizer(top.obj("optimizer")) : OptimizerConfig{};

        Obj t = top.obj("train");
        c.options.seed = t.count("seed", 0);
        if (ov.seed) c.options.seed = *ov.seed;
        c.options.max_epochs = t.count("max_epochs", 1000);
        if (c.options.max_epochs < 1) throw ConfigError("config.train.max_epochs: must be >= 1");
        c.options.target_loss = parse_target(t);
        t.done();

        Obj d = top.obj("data");
        c.data_path = relative_to(path, d.str("path"));
        const std::size_t n_inputs = d.count("n_inputs", c.model.input_size());
        const double fraction = d.num("validation_fraction", 0.0);
        d.done();
        if (c.model.empty() && n_inputs == 0) throw ConfigError("config.data.n_inputs: required for an empty model");
        if (!fs::exists(c.data_path)) throw ConfigError("dataset file '" + c.data_path.string() + "' does not exist");
        try {
            c.data = Dataset::from_csv(c.data_path, n_inputs);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("dataset: ") + e.what());
        }
        c.data.validation_fraction = fraction;
        try {
            c.data.validate(c.model.empty() ? n_inputs : c.model.input_size(), c.model.output_size());
            c.model.check_stability(c.model.init_theta(c.options.seed));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("config: " + std::string(e.what()));
        }

        c.out_dir = resolve_out_dir(parse_io(root, "config"), ov);
        if (root.contains("io")) top.raw("io");
        top.done();
        return c;
    });
}

GenBlockConfig load_gen_block_config(const fs::path& path, const Overrides& ov) {
    return guarded(path, [&] {
        json root = read_json(path);
        Obj top(root, "config");
        GenBlockConfig c;
        Obj b = top.obj("block");
        const std::string kind = b.str("kind");
        c.file_name = b.str("file", "block.json");
        if (c.file_name.empty() || fs::path(c.file_name).has_parent_path()) {
            throw ConfigError("config.block.file: must be a plain file name");
        }

        auto grid = [&]() { return parse_grid(top.obj("grid")); };
        auto coeffs = [&](const GridSpec& g) {
            return top.has("model") ? parse_coefficients(top.obj("model"), g) : EllipticCoefficients::constant(g, 0.0);
        };

        if (kind == "conv1d") {
            const GridSpec g = grid();
            if (g.dims != 1) throw ConfigError("config.grid.dims: conv1d needs a 1D grid");
            c.block = gen_conv1d(coeffs(g), g);
        } else if (kind == "conv2d") {
            const std::size_t channels = b.count("channels", 1);
            if (b.has("kernel")) {
                const Matrix k = matrix_rows(b.raw("kernel"), "config.block.kernel");
                if (k.rows() != 3 || k.cols() != 3) throw ConfigError("config.block.kernel: expected 3x3");
                Stencil2D s;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) s.taps[i][j] = k(i, j);
                BoundaryCondition bc;
                bc.kind = parse_boundary_kind(b.str("bc"));
                bc.value = b.num("bc_value", 0.0);
                c.block = gen_conv2d(s, channels, bc);
            } else {
                const GridSpec g = grid();
                if (g.dims != 2) throw ConfigError("config.grid.dims: conv2d needs a 2D grid");
                const std::string stencil = b.str("stencil", "nine_point");
                if (stencil != "nine_point" && stencil != "five_point") {
                    throw ConfigError("config.block.stencil: expected five_point or nine_point");
                }
                const double diff = b.num("diffusion", 1.0);
                const Stencil2D base =
                    laplacian_2d(stencil == "nine_point" ? Laplacian2D::nine_point : Laplacian2D::five_point);
                c.block = gen_conv2d(base.scaled(diff * g.ratio()), channels, g.bc);
            }
        } else if (kind == "dense") {
            Matrix w = matrix_rows(b.raw("w"), "config.block.w");
            Vector bias = vector_or_zeros(b, "bias", w.rows());
            ReactionSpec act = parse_activation(b, "activation", static_cast<std::size_t>(w.rows()));
            c.block = gen_dense(std::move(w), std::move(bias), std::move(act));
        } else if (kind == "rnn") {
            const GridSpec g = grid();
            if (g.dims != 1) throw ConfigError("config.grid.dims: rnn needs a 1D grid");
            c.block = gen_rnn_cell(b.num("dxy", 0.0), b.num("dz", 0.0), b.num("speed"), g);
        } else if (kind == "rbm") {
            const GridSpec g = grid();
            if (g.dims != 1) throw ConfigError("config.grid.dims: rbm needs a 1D grid");
            const auto n = static_cast<Eigen::Index>(g.n_points);
            Vector vb = vector_or_zeros(b, "b", n);
            Vector hc = vector_or_zeros(b, "c", n);
            c.block = gen_rbm(coeffs(g), g, std::move(vb), std::move(hc));
        } else {
            throw ConfigError("config.block.kind: unknown block kind '" + kind +
                              "' (expected conv1d, conv2d, dense, rnn, rbm)");
        }
        b.done();
        c.out_dir = resolve_out_dir(parse_io(root, "config"), ov);
        if (root.contains("io")) top.raw("io");
        top.done();
        return c;
    });
}

VerifyConfig load_verify_config(const fs::path& path) {
    return guarded(path, [&] {
        json root = read_json(path);
        Obj top(root, "config");
        VerifyConfig c;
        c.suite = top.str("suite", "all");
        if (root.contains("io")) top.raw("io");
        top.done();
        return c;
    });
}

} // namespace npde::cli
