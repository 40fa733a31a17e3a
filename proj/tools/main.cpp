#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtraj/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Stochastic trajectory ensembles for driven damped nonlinear "
                 "oscillators (Duffing pairs and SQUID rings)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string validate_path;
    std::vector<std::string> summary_paths;
    std::string plot_prefix = "entropy_plot";
    qtraj::RunOverrides overrides;
    std::uint64_t seed_flag = 0;
    bool seed_set = false;

    CLI::App* run = app.add_subcommand("run", "Execute a run configuration");
    run->add_option("config", config_path, "JSON run configuration")->required();
    run->add_option("--seed", seed_flag, "Override the run seed")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--workers", overrides.workers, "Worker thread count")
        ->check(CLI::PositiveNumber);
    run->add_flag("--resume", overrides.resume,
                  "Reuse per-trajectory checkpoints from a previous run");
    run->add_option("--output-dir", overrides.output_dir, "Override config output_dir");

    CLI::App* plot = app.add_subcommand("plot", "Emit plot data and gnuplot script");
    plot->add_option("summary", summary_paths, "summary.csv file(s), one series each")
        ->required();
    plot->add_option("--out", plot_prefix, "Output file prefix");

    CLI::App* validate = app.add_subcommand("validate", "Check a configuration file");
    validate->add_option("config", validate_path, "JSON run configuration")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            qtraj::RunConfig config = qtraj::parse_config(config_path);
            if (seed_set) overrides.seed = seed_flag;
            return qtraj::run_config(config, overrides);
        }
        if (plot->parsed()) {
            std::vector<std::filesystem::path> files(summary_paths.begin(),
                                                     summary_paths.end());
            return qtraj::emit_plot(files, plot_prefix);
        }
        if (validate->parsed()) {
            qtraj::validate_config(qtraj::parse_config(validate_path));
            std::cout << "config ok\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
