#include <iostream>

#include "CLI11.hpp"
#include "kerrlab/cli.hpp"

int main(int argc, char** argv) {
    namespace cli = kerrlab::cli;

    CLI::App app{"Kerr-cell scenario runner"};
    app.set_version_flag("--version", std::string(cli::kToolVersion));
    app.require_subcommand(1);

    std::string run_config;
    std::string out_dir;
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "Run one scenario and write its artifacts");
    run->add_option("config", run_config, "Scenario config (JSON)")->required();
    auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    auto* seed_opt = run->add_option("--seed", seed, "Master seed (overrides seed)");

    std::string validate_config;
    auto* validate = app.add_subcommand("validate", "Report every schema violation in a config");
    validate->add_option("config", validate_config, "Scenario config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    if (*run) {
        cli::RunOptions options;
        if (*out_opt) options.output_dir = out_dir;
        if (*seed_opt) options.seed = seed;
        return cli::run_file(run_config, options, std::cerr);
    }

    const auto diagnostics = cli::validate_file(validate_config);
    for (const auto& d : diagnostics) {
        std::cout << (d.path.empty() ? "" : d.path + ": ") << d.message << "\n";
    }
    if (diagnostics.empty()) std::cout << "ok\n";
    return diagnostics.empty() ? cli::kExitOk : cli::kExitConfigInvalid;
}
