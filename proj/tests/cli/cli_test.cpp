#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string output;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

// Runs the CLI with stderr folded into stdout. NPDE_OUT is cleared unless `npde_out` is given.
RunResult run(const std::string& args, const std::string& npde_out = "") {
    std::string cmd = npde_out.empty() ? "env -u NPDE_OUT " : "env NPDE_OUT=" + quote(npde_out) + " ";
    cmd += quote(NPDE_BINARY) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::path(NPDE_TEST_TMP) / info->name();
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }

    fs::path write_config(const std::string& name, const std::string& text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    static std::string configs(const std::string& name) { return (fs::path(NPDE_CONFIG_DIR) / name).string(); }

    std::string out(const std::string& sub = "out") const { return (dir_ / sub).string(); }

    fs::path dir_;
};

const char* kSmallHeat = R"({
  "grid": {"n_points": 16, "h": 0.5, "k": 0.0625, "bc": "periodic"},
  "model": {"pde": "diffusion", "A": 1.0},
  "initial": {"kind": "gaussian", "amplitude": 1.0, "center": 4.0, "sigma2": 1.0},
  "run": {"n_steps": 20, "frame_stride": 5}
})";

} // namespace

TEST_F(Cli, SolveWritesTrajectoryAndFinal) {
    const auto cfg = write_config("heat.json", kSmallHeat);
    const RunResult r = run("solve --config " + quote(cfg.string()) + " --out " + quote(out()));
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("steps=20"), std::string::npos) << r.output;
    EXPECT_TRUE(fs::exists(fs::path(out()) / "trajectory.csv"));
    EXPECT_TRUE(fs::exists(fs::path(out()) / "final.csv"));
    const std::string traj = slurp(fs::path(out()) / "trajectory.csv");
    EXPECT_EQ(std::count(traj.begin(), traj.end(), '\n'), 5); // steps 0, 5, 10, 15, 20
}

TEST_F(Cli, SolveIsDeterministic) {
    const auto cfg = write_config("rand.json", R"({
  "grid": {"n_points": 32, "h": 0.5, "k": 0.05, "bc": "mirror"},
  "model": {"A": 1.0, "reaction": {"kind": "fisher", "rate": 1.0}},
  "initial": {"kind": "random", "low": 0.0, "high": 1.0},
  "run": {"n_steps": 50, "seed": 9}
})");
    ASSERT_EQ(run("solve --config " + quote(cfg.string()) + " --out " + quote(out("a"))).code, 0);
    ASSERT_EQ(run("solve --config " + quote(cfg.string()) + " --out " + quote(out("b"))).code, 0);
    EXPECT_EQ(slurp(fs::path(out("a")) / "trajectory.csv"), slurp(fs::path(out("b")) / "trajectory.csv"));
    ASSERT_EQ(run("solve --config " + quote(cfg.string()) + " --seed 10 --out " + quote(out("c"))).code, 0);
    EXPECT_NE(slurp(fs::path(out("a")) / "final.csv"), slurp(fs::path(out("c")) / "final.csv"));
}

TEST_F(Cli, ZeroDiffusionLeavesFieldUnchanged) {
    const auto cfg = write_config("frozen.json", R"({
  "grid": {"n_points": 5, "h": 1.0, "k": 0.1, "bc": "dirichlet", "bc_value": 2.0},
  "model": {"A": 0.0},
  "initial": {"kind": "values", "values": [0.5, 1.25, -3.0, 0.0, 7.0]},
  "run": {"n_steps": 10}
})");
    const RunResult r = run("solve --config " + quote(cfg.string()) + " --out " + quote(out()));
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_EQ(slurp(fs::path(out()) / "final.csv"), "0.5,1.25,-3,0,7\n");
}

TEST_F(Cli, NpdeOutOverridesOutFlag) {
    const auto cfg = write_config("heat.json", kSmallHeat);
    const RunResult r = run("solve --config " + quote(cfg.string()) + " --out " + quote(out("flag")), out("env"));
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_TRUE(fs::exists(fs::path(out("env")) / "final.csv"));
    EXPECT_FALSE(fs::exists(fs::path(out("flag"))));
}

TEST_F(Cli, SolverDivergenceExitsTwo) {
    const RunResult r = run("solve --config " + quote(configs("unstable.json")) + " --out " + quote(out()));
    EXPECT_EQ(r.code, 2) << r.output;
    EXPECT_NE(r.output.find("diverged at step"), std::string::npos) << r.output;
}

TEST_F(Cli, InvalidConfigExitsOneAndWritesNothing) {
    const auto bad = write_config("bad.json", R"({
  "grid": {"n_points": 2, "h": 0.5, "k": 0.1, "bc": "periodic"},
  "model": {"A": 1.0},
  "initial": {"kind": "constant", "value": 1.0},
  "run": {"n_steps": 3}
})");
    RunResult r = run("solve --config " + quote(bad.string()) + " --out " + quote(out()));
    EXPECT_EQ(r.code, 1) << r.output;
    EXPECT_FALSE(fs::exists(out()));

    const auto unknown = write_config("unknown.json", R"({"grid": {"n_points": 8, "h": 0.5, "k": 0.1}, "bogus": 1})");
    r = run("solve --config " + quote(unknown.string()) + " --out " + quote(out()));
    EXPECT_EQ(r.code, 1) << r.output;
    EXPECT_FALSE(fs::exists(out()));

    const auto no_bc = write_config("no_bc.json", R"({
  "grid": {"n_points": 8, "h": 0.5, "k": 0.1},
  "model": {"A": 1.0},
  "initial": {"kind": "constant", "value": 1.0},
  "run": {"n_steps": 3}
})");
    r = run("solve --config " + quote(no_bc.string()) + " --out " + quote(out()));
    EXPECT_EQ(r.code, 1) << r.output;
    EXPECT_NE(r.output.find("bc"), std::string::npos) << r.output;
    EXPECT_FALSE(fs::exists(out()));

    const auto broken = write_config("broken.json", "{ not json");
    EXPECT_EQ(run("solve --config " + quote(broken.string())).code, 1);
    EXPECT_EQ(run("solve --config " + quote((dir_ / "missing.json").string())).code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
}

TEST_F(Cli, MissingDatasetNamesPath) {
    const auto cfg = write_config("train.json", R"({
  "model": {"stages": [{"type": "dense", "inputs": 2, "outputs": 1, "activation": "none"}]},
  "data": {"path": "nowhere/data.csv"},
  "train": {"target_loss": 0.1}
})");
    const RunResult r = run("train --config " + quote(cfg.string()) + " --out " + quote(out()));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.output.find("nowhere/data.csv"), std::string::npos) << r.output;
    EXPECT_FALSE(fs::exists(out()));
}

TEST_F(Cli, InfiniteTargetStopsAfterOneEpoch) {
    std::ofstream(dir_ / "xor.csv") << "0,0,0\n0,1,1\n1,0,1\n1,1,0\n";
    const auto cfg = write_config("train.json", R"({
  "model": {"stages": [{"type": "dense", "inputs": 2, "outputs": 1, "activation": "sigmoid"}]},
  "data": {"path": "xor.csv"},
  "train": {"seed": 3, "max_epochs": 100, "target_loss": "inf"}
})");
    const RunResult r = run("train --config " + quote(cfg.string()) + " --out " + quote(out()));
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("epochs=1 "), std::string::npos) << r.output;
    EXPECT_EQ(std::count(r.output.begin(), r.output.end(), '\n') > 0, true);
    const std::string curve = slurp(fs::path(out()) / "loss_curve.csv");
    EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 2);
}

TEST_F(Cli, GaussNewtonLinearRegressionOneEpoch) {
    const RunResult r = run("train --config " + quote(configs("linreg.json")) + " --out " + quote(out()));
    ASSERT_EQ(r.code, 0) << r.output;
    EXPECT_NE(r.output.find("epochs=1 "), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("converged=true"), std::string::npos) << r.output;
    EXPECT_TRUE(fs::exists(fs::path(out()) / "blocks.json"));
}

TEST_F(Cli, TrainingWithoutConvergenceExitsThree) {
    std::ofstream(dir_ / "xor.csv") << "0,0,0\n0,1,1\n1,0,1\n1,1,0\n";
    const auto cfg = write_config("train.json", R"({
  "model": {"stages": [{"type": "dense", "inputs": 2, "outputs": 1, "activation": "none"}]},
  "data": {"path": "xor.csv"},
  "optimizer": {"kind": "sgd", "eta": 0.01},
  "train": {"max_epochs": 5, "target_loss": 1e-9}
})");
    const RunResult r = run("train --config " + quote(cfg.string()) + " --out " + quote(out()));
    EXPECT_EQ(r.code, 3) << r.output;
    EXPECT_NE(r.output.find("converged=false"), std::string::npos) << r.output;
}

TEST_F(Cli, TrainingDivergenceExitsThree) {
    std::ofstream(dir_ / "lin.csv") << "1,2,3\n-2,1,0.5\n3,3,-1\n";
    const auto cfg = write_config("train.json", R"({
  "model": {"stages": [{"type": "dense", "inputs": 2, "outputs": 1, "activation": "none"}]},
  "data": {"path": "lin.csv"},
  "optimizer": {"kind": "sgd", "eta": 10.0},
  "train": {"max_epochs": 1000, "target_loss": 1e-9}
})");
    EXPECT_EQ(run("train --config " + quote(cfg.string()) + " --out " + quote(out())).code, 3);
}

TEST_F(Cli, GenBlockRoundTripIsByteIdentical) {
    const RunResult r = run("gen-block --config " + quote(configs("gen_conv1d.json")) + " --out " + quote(out()));
    ASSERT_EQ(r.code, 0) << r.output;
    const fs::path block = fs::path(out()) / "conv1d.json";
    const std::string first = slurp(block);
    ASSERT_FALSE(first.empty());
    // regenerate into a second directory: same bytes
    ASSERT_EQ(run("gen-block --config " + quote(configs("gen_conv1d.json")) + " --out " + quote(out("again"))).code, 0);
    EXPECT_EQ(slurp(fs::path(out("again")) / "conv1d.json"), first);
    EXPECT_NE(first.find("\"kind\""), std::string::npos);
}

TEST_F(Cli, GrayScottFrameCount) {
    const auto cfg = write_config("gs.json", R"({
  "grid": {"dims": 2, "n_points": 16, "h": 0.009765625, "k": 1.0, "bc": "periodic"},
  "model": {"pde": "gray_scott", "du": 2e-5, "dv": 1e-5, "feed": 0.04, "kill": 0.06},
  "initial": {"kind": "patch", "size": 4, "noise": 0.01},
  "run": {"n_steps": 40, "frame_stride": 10, "seed": 5}
})");
    const RunResult r = run("solve --config " + quote(cfg.string()) + " --out " + quote(out()));
    ASSERT_EQ(r.code, 0) << r.output;
    std::size_t pgm = 0;
    for (const auto& e : fs::directory_iterator(out())) pgm += e.path().extension() == ".pgm";
    EXPECT_EQ(pgm, 4u);
    EXPECT_TRUE(fs::exists(fs::path(out()) / "final_u.csv"));
    EXPECT_TRUE(fs::exists(fs::path(out()) / "final_v.csv"));
}

TEST_F(Cli, VerifySuites) {
    const RunResult ok = run("verify --suite stencils");
    EXPECT_EQ(ok.code, 0) << ok.output;
    EXPECT_NE(ok.output.find("PASS"), std::string::npos);
    const RunResult bad = run("verify --suite nonsense");
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.output.find("stencils"), std::string::npos) << bad.output;
}
