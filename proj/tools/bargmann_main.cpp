// Experiment runner: executes protocol and application runs from JSON
// configs, optionally validating every estimate against the brute-force
// oracle. See README.md for the config schema.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bargmann/runner.hpp"

namespace {

using bargmann::json;
namespace runner = bargmann::runner;

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw runner::config_error("cannot open config file: " + path);
    return json::parse(f);
}

std::string stem_of(const std::string& path) {
    std::filesystem::path p(path);
    return (p.parent_path() / p.stem()).string();
}

int run_one(const std::string& config_path, const runner::Overrides& overrides) {
    const json doc = load_config(config_path);
    const auto cfg = runner::parse_config(doc, overrides, stem_of(config_path));
    const auto outcome = runner::run_experiment(cfg);
    std::cout << outcome.message << "\n";
    return outcome.status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear-optical multivariate trace (Bargmann invariant) estimator"};
    app.require_subcommand(1);

    std::string config_path;
    runner::Overrides overrides;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--seed", overrides.seed, "override the config seed");
        cmd->add_option("--out", overrides.out, "override the output path");
        cmd->add_option("--tolerance", overrides.tolerance,
                        "override the validation tolerance");
    };

    auto* cmd_run = app.add_subcommand("run", "execute one experiment");
    add_common(cmd_run);

    auto* cmd_validate =
        app.add_subcommand("validate", "execute with oracle validation enforced");
    add_common(cmd_validate);

    auto* cmd_sweep = app.add_subcommand("sweep", "re-run across one numeric axis");
    add_common(cmd_sweep);
    std::string axis;
    std::vector<double> values;
    cmd_sweep->add_option("--axis", axis, "JSON pointer of the swept field, e.g. /mode/N")
        ->required();
    cmd_sweep->add_option("--values", values, "axis values")
        ->required()
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : runner::kStatusUsage;
    }

    if (!runner::apply_sector_cap_env()) {
        std::cerr << runner::kSectorCapEnvVar << " must be a positive integer\n";
        return runner::kStatusUsage;
    }

    try {
        if (cmd_run->parsed()) return run_one(config_path, overrides);
        if (cmd_validate->parsed()) {
            overrides.force_validate = true;
            return run_one(config_path, overrides);
        }
        const json doc = load_config(config_path);
        const auto outcome = runner::run_sweep(doc, overrides, stem_of(config_path),
                                               axis, values);
        if (outcome.status == 0)
            std::cout << outcome.message << "\n";
        else
            std::cerr << outcome.message << "\n";
        return outcome.status;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return runner::status_for_exception(e);
    }
}
