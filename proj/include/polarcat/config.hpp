// SPDX-License-Identifier: Apache-2.0
//
// Flat key = value scenario configuration. Unknown keys are errors; every
// value is validated before any computation starts.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "polarcat/analysis.hpp"
#include "polarcat/protocol.hpp"
#include "polarcat/tomography.hpp"

namespace polarcat {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Scenario { resource, rsp, teleport, swap_, tomo_roundtrip, rates_, bloch_map };

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);  // throws ConfigError

/// Parses `key = value` lines ('#' comments, blank lines allowed); duplicate
/// or malformed lines are errors.
std::map<std::string, std::string> parse_key_values(const std::string& text);

struct ScenarioConfig {
    Scenario scenario = Scenario::resource;
    std::filesystem::path output_dir = ".";

    ProtocolParams protocol;
    TomographySettings tomo;
    RateParams rate;
    int n_grid = 10000;
    cplx input_a{1.0, 0.0};  // rsp / teleport input-state coefficients
    cplx input_b{0.0, 0.0};
    bool quiet = false;

    /// Parses and validates a config file; throws ConfigError on unknown
    /// keys, bad values, or missing `scenario`.
    static ScenarioConfig load(const std::filesystem::path& path);
    static ScenarioConfig from_text(const std::string& text);
};

/// The protocol-level loader accepts only the protocol keys
/// (squeeze_r, R_tap, beta_over_alpha, gamma_plus, gamma_minus, visibility,
/// ratio_pdb_pgood_at_H, eta_homodyne, cutoff_cv, seed).
ProtocolParams protocol_params_from_text(const std::string& text);

}  // namespace polarcat
