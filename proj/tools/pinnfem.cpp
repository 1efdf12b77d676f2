#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pinnfem/cli/commands.hpp"
#include "pinnfem/cli/config.hpp"
#include "pinnfem/cli/registry.hpp"
#include "pinnfem/common/errors.hpp"

namespace {

std::string footer()
{
    std::string s = "Presets:";
    for (const auto& p : pinnfem::cli::preset_names()) s += " " + p;
    s += "\nProblems:";
    for (const auto& p : pinnfem::cli::problem_ids()) s += " " + p;
    s += "\nPINNFEM_THREADS caps the worker count.\n"
         "Exit codes: 0 ok, 2 config, 3 training divergence, 4 solver, 5 IO.";
    return s;
}

struct Args {
    std::string config;
    std::string preset;
    std::uint64_t seed = 0;
    bool train_first = false;
    std::string out;
};

void add_options(CLI::App* cmd, Args& a)
{
    cmd->add_option("--config", a.config, "INI run config")->check(CLI::ExistingFile);
    cmd->add_option("--preset", a.preset, "table preset (table2 ... table15)");
    cmd->add_option("--seed", a.seed, "single training seed, overrides the config");
    cmd->add_flag("--train-first", a.train_first, "train a network when no checkpoint is configured");
    cmd->add_option("--out", a.out, "output directory");
    cmd->footer(footer());
}

} // namespace

int main(int argc, char** argv)
{
    namespace cli = pinnfem::cli;
    CLI::App app{"PINN-enriched finite element solver"};
    app.footer(footer());
    app.require_subcommand(1);
    Args args;
    CLI::App* train = app.add_subcommand("train", "train networks and write checkpoints and loss logs");
    CLI::App* study = app.add_subcommand("study", "convergence study with report and table CSVs");
    CLI::App* solve = app.add_subcommand("solve", "solve on one mesh and dump fields");
    for (CLI::App* c : {train, study, solve}) add_options(c, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::exit_config;
    }

    try {
        cli::verify_registry();
        if (args.config.empty() && args.preset.empty()) throw pinnfem::ConfigError("give --config or --preset");
        cli::RunConfig config = args.preset.empty() ? cli::RunConfig{} : cli::preset(args.preset);
        if (!args.config.empty()) config = cli::load_config(args.config, std::move(config));
        cli::CommandOptions opts;
        CLI::App* cmd = app.get_subcommands().front();
        if (cmd->count("--seed")) opts.seed = args.seed;
        opts.train_first = args.train_first;
        if (!args.out.empty()) opts.out_dir = args.out;

        if (cmd == train) {
            cli::cmd_train(config, opts, std::cout);
        } else if (cmd == study) {
            if (!cli::cmd_study(config, opts, std::cout)) return cli::exit_solver;
        } else {
            cli::cmd_solve(config, opts, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "pinnfem: " << e.what() << '\n';
        return cli::exit_code_for(e);
    }
    return cli::exit_ok;
}
