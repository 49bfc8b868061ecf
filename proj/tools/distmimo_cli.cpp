// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "distmimo/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

distmimo::ScenarioConfig load_config(const std::string& scenario_path,
                                     const std::string& figure) {
    if (!figure.empty()) return distmimo::figure_preset(figure);
    std::ifstream f(scenario_path);
    if (!f)
        throw distmimo::ConfigError("cannot open scenario file '" + scenario_path + "'");
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw distmimo::ConfigError("invalid JSON in '" + scenario_path + "': " +
                                    e.what());
    }
    return distmimo::ScenarioConfig::from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Receiver-distortion massive MIMO simulation suite"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a scenario or a figure preset");
    std::string scenario_path, figure, out_path, format = "csv";
    std::uint64_t seed = 0;
    int realizations = -1, workers = 1;
    std::int64_t mc_samples = -1;
    bool seed_given = false;
    auto* opt_scn = run->add_option("--scenario", scenario_path, "Scenario JSON file");
    auto* opt_fig = run->add_option("--figure", figure, "Preset name fig3..fig10");
    opt_scn->excludes(opt_fig);
    run->add_option("--seed", seed, "Override the master seed")
        ->each([&](const std::string&) { seed_given = true; });
    run->add_option("--realizations", realizations, "Override the realization count");
    run->add_option("--mc-samples", mc_samples, "Override the Bussgang sample count");
    run->add_option("--workers", workers, "Worker thread count")->check(CLI::PositiveNumber);
    run->add_option("--out", out_path, "Output path (default stdout)");
    run->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the diagnostic
        return kExitConfig;
    }

    try {
        if (scenario_path.empty() && figure.empty())
            throw distmimo::ConfigError("one of --scenario or --figure is required");
        distmimo::ScenarioConfig cfg = load_config(scenario_path, figure);
        if (seed_given) {
            cfg.seed = seed;
            cfg.seed_set = true;
        }
        if (realizations >= 0) cfg.realizations = realizations;
        if (mc_samples >= 0) cfg.mc_samples = mc_samples;
        cfg.validate();

        const distmimo::ResultTable table = distmimo::run_scenario(cfg, workers);
        if (out_path.empty()) {
            if (format == "csv")
                std::cout << distmimo::results_to_csv(table);
            else
                std::cout << distmimo::results_to_json(table).dump(2) << "\n";
        } else {
            distmimo::write_results(table, out_path, format);
        }
        return 0;
    } catch (const distmimo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}
