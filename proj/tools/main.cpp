#include "zeno_otto/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

int resolve_workers(std::optional<int> cli_value) {
    if (cli_value) return *cli_value;
    if (const char* env = std::getenv("ZENO_OTTO_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
            throw zeno_otto::ConfigError("ZENO_OTTO_WORKERS is not a valid worker count");
        }
        throw zeno_otto::ConfigError("ZENO_OTTO_WORKERS is not a valid worker count");
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace zeno_otto;

    CLI::App app{"Deterministic simulator of Zeno-lubricated qubit Otto engines"};
    app.require_subcommand(0, 1);

    CLI::App* run = app.add_subcommand("run", "Run a preset or a config file");
    std::string preset_id, config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::string profile_str = "desk";
    bool list_presets = false, validate_only = false;

    CLI::Option* opt_preset = run->add_option("--preset", preset_id, "Preset id (see --list-presets)");
    CLI::Option* opt_config = run->add_option("--config", config_path, "Path to a JSON config file");
    opt_preset->excludes(opt_config);
    run->add_option("--seed", seed, "Master seed override (u64)");
    run->add_option("--out", out_dir, "Output directory (default: preset id or config output_dir)");
    run->add_option("--workers", workers, "Worker threads (default: $ZENO_OTTO_WORKERS or 1)");
    run->add_option("--profile", profile_str, "Preset grid profile: desk or full")
        ->check(CLI::IsMember({"desk", "full"}));
    run->add_flag("--list-presets", list_presets, "List preset ids and exit");
    run->add_flag("--validate-only", validate_only, "Validate the config/preset and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!run->parsed()) {
            std::cout << app.help() << std::flush;
            return 0;
        }
        if (list_presets) {
            for (const std::string& id : preset_ids()) std::cout << id << '\n';
            return 0;
        }
        if (preset_id.empty() && config_path.empty()) {
            throw ConfigError("run: need --preset or --config (or --list-presets)");
        }

        const Profile profile = profile_str == "full" ? Profile::Full : Profile::Desk;
        const int n_workers = resolve_workers(workers);

        if (!preset_id.empty()) {
            if (!is_preset(preset_id)) throw ConfigError("unknown preset '" + preset_id + "'");
            if (validate_only) {
                std::cout << "preset '" << preset_id << "' ok\n";
                return 0;
            }
            const RunOutput output = run_preset(preset_id, profile, seed, n_workers);
            const std::string dir = out_dir.empty() ? preset_id : out_dir;
            write_output(output, dir);
            std::cout << "wrote " << output.tables.size() << " table(s) + manifest to " << dir
                      << '\n';
            return 0;
        }

        ExperimentConfig cfg = parse_config_file(config_path);
        if (seed) cfg.params.master_seed = *seed;
        if (workers) cfg.workers = n_workers;
        if (validate_only) {
            std::cout << "config '" << config_path << "' ok\n";
            return 0;
        }
        const RunOutput output = run_config(cfg);
        const std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
        write_output(output, dir);
        std::cout << "wrote " << output.tables.size() << " table(s) + manifest to " << dir << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const InvariantViolation& e) {
        std::cerr << "numerical invariant violation: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
