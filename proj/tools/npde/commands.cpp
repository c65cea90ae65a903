#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "npde/error.hpp"
#include "npde/io.hpp"
#include "npde/verify.hpp"

namespace npde::cli {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path, bool binary = false) {
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    return f;
}

void print_summary(std::ostream& out, const std::string& label, const FieldState& f) {
    out << label << "min=" << format_double(f.min()) << " max=" << format_double(f.max())
        << " sum=" << format_double(f.sum()) << '\n';
}

std::string frame_name(std::size_t step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06zu.pgm", step);
    return buf;
}

void write_frame(const fs::path& dir, std::size_t step, const FieldState& f) {
    auto file = open_out(dir / frame_name(step), true);
    write_pgm(file, f);
}

int solve_single(const SolveConfig& c, std::ostream& out, std::ostream& err) {
    auto traj = open_out(c.out_dir / "trajectory.csv");
    FieldState last = c.initial;
    try {
        solve_streaming(c.initial, c.coeffs, c.grid, c.n_steps, c.scheme,
                        [&](std::size_t step, const FieldState& f) {
                            if (step % c.frame_stride == 0) {
                                write_trajectory_slice(traj, step, f);
                                if (step > 0 && f.dims() == 2 && c.write_frames) write_frame(c.out_dir, step, f);
                            }
                            if (step == c.n_steps) last = f;
                        });
    } catch (const DivergenceError& e) {
        err << "error: solver diverged at step " << (e.step() ? *e.step() : 0) << ": " << e.what() << '\n';
        return kSolverDivergence;
    }
    auto fin = open_out(c.out_dir / "final.csv");
    write_csv(fin, last);
    out << "steps=" << c.n_steps << '\n';
    print_summary(out, "", last);
    return kOk;
}

int solve_pair(const SolveConfig& c, std::ostream& out, std::ostream& err) {
    const auto rxn = TwoComponentReaction::gray_scott(c.feed, c.kill);
    auto tu = open_out(c.out_dir / "trajectory_u.csv");
    auto tv = open_out(c.out_dir / "trajectory_v.csv");
    TwoComponentState state = c.initial_pair;
    write_trajectory_slice(tu, 0, state.u);
    write_trajectory_slice(tv, 0, state.v);
    for (std::size_t step = 1; step <= c.n_steps; ++step) {
        try {
            state = step_two_component(state, c.du, c.dv, rxn, c.grid);
        } catch (const DivergenceError& e) {
            err << "error: solver diverged at step " << (step - 1) << ": " << e.what() << '\n';
            return kSolverDivergence;
        }
        if (step % c.frame_stride == 0) {
            write_trajectory_slice(tu, step, state.u);
            write_trajectory_slice(tv, step, state.v);
            if (c.write_frames) write_frame(c.out_dir, step, state.v);
        }
    }
    {
        auto fu = open_out(c.out_dir / "final_u.csv");
        write_csv(fu, state.u);
        auto fv = open_out(c.out_dir / "final_v.csv");
        write_csv(fv, state.v);
    }
    out << "steps=" << c.n_steps << '\n';
    print_summary(out, "u: ", state.u);
    print_summary(out, "v: ", state.v);
    return kOk;
}

} // namespace

int cmd_solve(const SolveConfig& config, std::ostream& out, std::ostream& err) {
    if (!config.two_component && config.scheme == Scheme::explicit_euler) {
        const Stability s = cfl_check(config.coeffs, config.grid);
        if (!s.stable) {
            err << "warning: explicit scheme unstable, r*max(A) = " << format_double(s.max_r_a) << " > "
                << format_double(s.limit) << '\n';
        }
    }
    fs::create_directories(config.out_dir);
    return config.two_component ? solve_pair(config, out, err) : solve_single(config, out, err);
}

int cmd_train(const TrainConfig& config, std::ostream& out, std::ostream& err) {
    const TrainReport report = train_supervised(config.model, config.data, config.loss, config.optimizer, config.options);
    fs::create_directories(config.out_dir);
    {
        auto curve = open_out(config.out_dir / "loss_curve.csv");
        write_loss_curve_csv(curve, report);
        auto blocks = open_out(config.out_dir / "blocks.json");
        blocks << serialize_blocks(config.model.to_blocks(report.final_theta));
    }
    out << summary_line(report) << '\n';
    if (report.validation_loss) out << "validation_loss=" << format_double(*report.validation_loss) << '\n';
    if (report.stop_reason == StopReason::divergence) {
        err << "error: training diverged after " << report.epochs() << " epochs\n";
        return kTrainingFailure;
    }
    return report.converged ? kOk : kTrainingFailure;
}

int cmd_gen_block(const GenBlockConfig& config, std::ostream& out, std::ostream& /*err*/) {
    fs::create_directories(config.out_dir);
    const fs::path path = config.out_dir / config.file_name;
    save_block(path, config.block);
    out << "kind=" << block_kind(config.block) << " file=" << path.string() << '\n';
    return kOk;
}

int cmd_verify(const VerifyConfig& config, std::ostream& out, std::ostream& err) {
    std::vector<int> ids;
    try {
        ids = verify::suite_criteria(config.suite);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n'
            << "usage: npde verify [--suite stencils|equivalence|gradients|oracles|all] [--config <path>]\n";
        return kConfigError;
    }
    bool ok = true;
    for (int id : ids) {
        const auto r = verify::run_criterion(id);
        verify::print_checks(out, r);
        ok = ok && r.passed();
    }
    return ok ? kOk : kVerifyFailure;
}

} // namespace npde::cli
