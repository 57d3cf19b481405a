// SPDX-License-Identifier: Apache-2.0
//
// Scenario runners behind the CLI: each executes one named experiment,
// writes its JSON/CSV artifacts into the output directory, and prints one
// machine-greppable summary line (`scenario=<name> key=value ...`).

#pragma once

#include <iosfwd>

#include "polarcat/config.hpp"

namespace polarcat {

/// Runs the configured scenario. Returns 0 on success; throws ConfigError
/// for configuration problems and polarcat exceptions for numerical failures
/// (the CLI maps these to exit codes 2 and 3).
int run_scenario(const ScenarioConfig& config, std::ostream& out);

}  // namespace polarcat
