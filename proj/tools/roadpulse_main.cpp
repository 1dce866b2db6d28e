#include "roadpulse/cli/commands.hpp"
#include "roadpulse/common/error.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"roadpulse - travel-time analytics and OD demand estimation for road networks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    int workers = 0;
    bool verbose = false;

    app.add_option("--config", config_path, "Config file (key = value lines)")->required();
    app.add_option("--out", out_dir, "Output directory (overrides config)");
    app.add_option("--seed", seed, "Random seed (overrides config)");
    app.add_option("--workers", workers, "Worker thread cap (overrides config)");
    app.add_flag("--verbose", verbose, "Progress logging on stderr");

    for (const std::string& name : roadpulse::cli::kCommands)
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        roadpulse::cli::RunConfig cfg = roadpulse::cli::load_config(config_path);
        if (const char* env_out = std::getenv("ROADPULSE_OUT"))
            cfg.out_dir = env_out;
        if (!out_dir.empty())
            cfg.out_dir = out_dir;
        if (seed >= 0)
            cfg.seed = static_cast<std::uint64_t>(seed);
        if (workers > 0)
            cfg.workers = workers;
        cfg.verbose = cfg.verbose || verbose;

        roadpulse::cli::run_command(command, cfg);
        return 0;
    } catch (const roadpulse::Error& e) {
        std::cerr << "error: " << command << ": " << e.code() << ": " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << command << ": internal: " << e.what() << std::endl;
        return 1;
    }
}
