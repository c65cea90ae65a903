#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "npde/error.hpp"

using namespace npde::cli;

int main(int argc, char** argv) {
    CLI::App app{"npde: reaction-diffusion solver and network block generator"};
    app.require_subcommand(1);

    std::string config;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> suite;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config, "experiment config (JSON)")->check(CLI::ExistingFile);
        if (config_required) opt->required();
        sub->add_option("--out", out_dir, "output directory (NPDE_OUT takes precedence)");
        sub->add_option("--seed", seed, "seed override");
    };
    auto* solve = app.add_subcommand("solve", "time-step a PDE and write the trajectory");
    auto* train = app.add_subcommand("train", "train a block/solver pipeline on a dataset");
    auto* gen = app.add_subcommand("gen-block", "generate a network block from a discretization");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    add_common(solve, true);
    add_common(train, true);
    add_common(gen, true);
    add_common(verify, false);
    verify->add_option("--suite", suite, "stencils, equivalence, gradients, oracles or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    const Overrides ov{out_dir ? std::optional<std::filesystem::path>(*out_dir) : std::nullopt, seed};
    try {
        if (solve->parsed()) return cmd_solve(load_solve_config(config, ov), std::cout, std::cerr);
        if (train->parsed()) return cmd_train(load_train_config(config, ov), std::cout, std::cerr);
        if (gen->parsed()) return cmd_gen_block(load_gen_block_config(config, ov), std::cout, std::cerr);
        VerifyConfig vc = config.empty() ? VerifyConfig{} : load_verify_config(config);
        if (suite) vc.suite = *suite;
        return cmd_verify(vc, std::cout, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const npde::DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return solve->parsed() ? kSolverDivergence : kTrainingFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
}
