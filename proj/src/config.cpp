// SPDX-License-Identifier: Apache-2.0

#include "polarcat/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace polarcat {

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::resource: return "resource";
        case Scenario::rsp: return "rsp";
        case Scenario::teleport: return "teleport";
        case Scenario::swap_: return "swap";
        case Scenario::tomo_roundtrip: return "tomo-roundtrip";
        case Scenario::rates_: return "rates";
        case Scenario::bloch_map: return "bloch-map";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    for (Scenario s : {Scenario::resource, Scenario::rsp, Scenario::teleport,
                       Scenario::swap_, Scenario::tomo_roundtrip, Scenario::rates_,
                       Scenario::bloch_map})
        if (name == scenario_name(s)) return s;
    throw ConfigError("unknown scenario: " + name);
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number '" + value + "'");
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse integer '" + value + "'");
    }
}

// "re" or "re,im"
cplx parse_complex(const std::string& key, const std::string& value) {
    const auto comma = value.find(',');
    if (comma == std::string::npos) return {parse_double(key, value), 0.0};
    return {parse_double(key, trim(value.substr(0, comma))),
            parse_double(key, trim(value.substr(comma + 1)))};
}

void check_range(const std::string& key, double v, double lo, double hi) {
    if (v < lo || v > hi)
        throw ConfigError("key '" + key + "': value " + std::to_string(v) +
                          " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "]");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (!kv.emplace(key, value).second)
            throw ConfigError("duplicate key: " + key);
    }
    return kv;
}

namespace {

const std::set<std::string> kProtocolKeys = {
    "squeeze_r",  "R_tap",     "beta_over_alpha",      "gamma_plus",
    "gamma_minus", "visibility", "ratio_pdb_pgood_at_H", "eta_homodyne",
    "cutoff_cv",  "seed"};

void apply_protocol_key(ProtocolParams& p, const std::string& key,
                        const std::string& value) {
    if (key == "squeeze_r") {
        p.squeeze_r = parse_double(key, value);
        check_range(key, p.squeeze_r, 0.0, 5.0);
    } else if (key == "R_tap") {
        p.R_tap = parse_double(key, value);
        check_range(key, p.R_tap, 0.0, 1.0);
    } else if (key == "beta_over_alpha") {
        p.beta_over_alpha = parse_double(key, value);
        if (p.beta_over_alpha <= 0.0)
            throw ConfigError("beta_over_alpha must be positive");
    } else if (key == "gamma_plus") {
        p.gamma_plus = parse_double(key, value);
        check_range(key, p.gamma_plus, 0.0, 3.0);
    } else if (key == "gamma_minus") {
        p.gamma_minus = parse_double(key, value);
        check_range(key, p.gamma_minus, 1e-6, 3.0);
    } else if (key == "visibility") {
        p.visibility = parse_double(key, value);
        check_range(key, p.visibility, 0.0, 1.0);
    } else if (key == "ratio_pdb_pgood_at_H") {
        p.ratio_pdb_pgood_at_H = parse_double(key, value);
        if (p.ratio_pdb_pgood_at_H < 0.0)
            throw ConfigError("ratio_pdb_pgood_at_H must be >= 0");
    } else if (key == "eta_homodyne") {
        p.eta_homodyne = parse_double(key, value);
        check_range(key, p.eta_homodyne, 1e-6, 1.0);
    } else if (key == "cutoff_cv") {
        p.cutoff_cv = static_cast<int>(parse_long(key, value));
        if (p.cutoff_cv < 2 || p.cutoff_cv > 64)
            throw ConfigError("cutoff_cv must be in [2, 64]");
    } else if (key == "seed") {
        p.seed = static_cast<unsigned long long>(parse_long(key, value));
    } else {
        throw ConfigError("unknown key: " + key);
    }
}

}  // namespace

ProtocolParams protocol_params_from_text(const std::string& text) {
    ProtocolParams p;
    for (const auto& [key, value] : parse_key_values(text)) {
        if (!kProtocolKeys.count(key)) throw ConfigError("unknown key: " + key);
        apply_protocol_key(p, key, value);
    }
    return p;
}

ScenarioConfig ScenarioConfig::from_text(const std::string& text) {
    ScenarioConfig cfg;
    auto kv = parse_key_values(text);
    if (!kv.count("scenario")) throw ConfigError("missing required key: scenario");

    for (const auto& [key, value] : kv) {
        if (kProtocolKeys.count(key)) {
            apply_protocol_key(cfg.protocol, key, value);
        } else if (key == "scenario") {
            cfg.scenario = scenario_from_name(value);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "n_samples") {
            cfg.tomo.n_samples = static_cast<int>(parse_long(key, value));
            if (cfg.tomo.n_samples <= 0) throw ConfigError("n_samples must be > 0");
        } else if (key == "n_phases") {
            const long n = parse_long(key, value);
            if (n <= 0 || n > 720) throw ConfigError("n_phases must be in [1, 720]");
            cfg.tomo.phase_grid.clear();
            for (long i = 0; i < n; ++i)
                cfg.tomo.phase_grid.push_back(i * std::numbers::pi / double(n));
        } else if (key == "max_iters") {
            cfg.tomo.max_iters = static_cast<int>(parse_long(key, value));
            if (cfg.tomo.max_iters <= 0) throw ConfigError("max_iters must be > 0");
        } else if (key == "log_likelihood_tol") {
            cfg.tomo.log_likelihood_tol = parse_double(key, value);
            if (cfg.tomo.log_likelihood_tol <= 0.0)
                throw ConfigError("log_likelihood_tol must be > 0");
        } else if (key == "n_grid") {
            cfg.n_grid = static_cast<int>(parse_long(key, value));
            if (cfg.n_grid < 100) throw ConfigError("n_grid must be >= 100");
        } else if (key == "R_rep") {
            cfg.rate.R_rep = parse_double(key, value);
        } else if (key == "R_B") {
            cfg.rate.R_B = parse_double(key, value);
        } else if (key == "R_alpha") {
            cfg.rate.R_alpha = parse_double(key, value);
        } else if (key == "R_beta") {
            cfg.rate.R_beta = parse_double(key, value);
        } else if (key == "eta_spcm") {
            cfg.rate.eta_spcm = parse_double(key, value);
            if (cfg.rate.eta_spcm <= 0.0 || cfg.rate.eta_spcm > 1.0)
                throw ConfigError("eta_spcm must be in (0, 1]");
        } else if (key == "a") {
            cfg.input_a = parse_complex(key, value);
        } else if (key == "b") {
            cfg.input_b = parse_complex(key, value);
        } else {
            throw ConfigError("unknown key: " + key);
        }
    }
    for (const auto& r : {cfg.rate.R_rep, cfg.rate.R_B, cfg.rate.R_alpha, cfg.rate.R_beta})
        if (r < 0.0) throw ConfigError("rates must be >= 0");
    if (std::norm(cfg.input_a) + std::norm(cfg.input_b) <= 0.0)
        throw ConfigError("input coefficients (a, b) cannot both be zero");

    // Shared knobs: tomography inherits the protocol efficiency/cutoff/seed.
    cfg.tomo.eta = cfg.protocol.eta_homodyne;
    cfg.tomo.cutoff = cfg.protocol.cutoff_cv;
    cfg.tomo.seed = cfg.protocol.seed;
    cfg.rate.a = cfg.input_a;
    cfg.rate.b = cfg.input_b;
    return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

}  // namespace polarcat
