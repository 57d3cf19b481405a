// SPDX-License-Identifier: Apache-2.0
//
// polarcat CLI: runs one scenario per invocation from a key = value config
// file. Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polarcat/scenarios.hpp"

int main(int argc, char** argv) {
    CLI::App app{"polarcat: hybrid polarization / cat-state qubit simulator"};

    std::string config_path;
    std::optional<unsigned long long> seed;
    std::optional<std::string> out_dir;
    bool quiet = false;

    app.add_option("--config", config_path, "scenario configuration file")->required();
    app.add_option("--seed", seed, "override the config seed");
    app.add_option("--out", out_dir, "override the output directory");
    app.add_flag("--quiet", quiet, "suppress the summary line");

    CLI11_PARSE(app, argc, argv);

    polarcat::ScenarioConfig cfg;
    try {
        cfg = polarcat::ScenarioConfig::load(config_path);
        if (seed) {
            cfg.protocol.seed = *seed;
            cfg.tomo.seed = *seed;
        }
        if (out_dir) cfg.output_dir = *out_dir;
        cfg.quiet = quiet;
    } catch (const polarcat::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::ostringstream summary;
        const int rc = polarcat::run_scenario(cfg, summary);
        if (!quiet) std::cout << summary.str();
        return rc;
    } catch (const polarcat::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
