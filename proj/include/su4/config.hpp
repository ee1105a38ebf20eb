// Copyright 2026 The su4sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "su4/dynamics.hpp"
#include "su4/params.hpp"

namespace su4 {

enum class RunMode { Evolve, Steady, Sweep, Correlate, OracleCheck };

enum class OutputFormat { Csv, Json };

/// Scalar and vector quantities a run may emit. Scalars share one results
/// file; vector quantities are written one file each.
inline const std::vector<std::string>& known_quantities() {
    static const std::vector<std::string> q{
        "trace",     "mean_photon", "field_amp", "inversion",         "spin_plus",
        "spin_zz",   "spin_corr",   "g2_zero",   "purity",            "entropy",
        "photon_distribution",      "sm_populations",                 "g1",
        "g2",        "spectrum"};
    return q;
}

inline bool quantity_is_vector(const std::string& q) {
    return q == "photon_distribution" || q == "sm_populations" || q == "g1" || q == "g2" ||
           q == "spectrum";
}

struct RunConfig {
    ModelParams model;

    RunMode mode = RunMode::Steady;
    std::string preset;
    double t_final = 1.0;
    int sample_points = 50;                  ///< evolve-mode time samples
    EvolveConfig tolerances;
    SteadyMethod steady_method = SteadyMethod::LinearSolve;
    InitialStateKind initial = InitialStateKind::AllGroundVacuum;
    std::string sweep_param;                 ///< a ModelParams key
    std::vector<double> sweep_values;
    double tau_max = 10.0;
    int tau_points = 200;
    double stationarity_tol = 1e-6;
    unsigned seed = 42;                      ///< oracle-check randomness

    std::string output_dir = "out";
    OutputFormat format = OutputFormat::Csv;
    std::vector<std::string> quantities{"trace", "mean_photon", "inversion"};
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number from '" + v + "'");
    }
}

inline long parse_long(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse integer from '" + v + "'");
    }
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

/// The collective linewidth scale used by the superradiance presets.
inline double gamma_collective(const ModelParams& p) {
    return p.kappa > 0 ? p.omega * p.omega / p.kappa : 0.0;
}

inline void apply_preset(RunConfig& cfg, const std::string& name) {
    if (name == "laser-threshold") {
        cfg.model.atoms = 10;
        cfg.model.omega = 1.0;
        cfg.model.gamma_decay = 5.0;
        cfg.model.kappa = 1.0;
        cfg.model.dephasing = 0.0;
        cfg.model.delta = 0.0;
        cfg.model.n_max = 90;
        cfg.mode = RunMode::Sweep;
        cfg.sweep_param = "w";
        cfg.sweep_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
        cfg.quantities = {"mean_photon", "spin_corr", "g2_zero", "entropy"};
    } else if (name == "superradiance-g2") {
        cfg.model.atoms = 10;
        cfg.model.omega = 1.0;
        cfg.model.kappa = 40.0;
        cfg.model.gamma_decay = 0.0;
        cfg.model.dephasing = 0.0;
        cfg.model.delta = 0.0;
        cfg.model.n_max = 8;
        cfg.mode = RunMode::Sweep;
        cfg.sweep_param = "w";
        const double gc = gamma_collective(cfg.model);
        cfg.sweep_values.clear();
        for (double f : {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0})
            cfg.sweep_values.push_back(f * gc);
        cfg.quantities = {"mean_photon", "g2_zero", "sm_populations"};
    } else {
        throw ConfigError("unknown preset '" + name +
                          "' (available: laser-threshold, superradiance-g2)");
    }
}

}  // namespace detail

/// Parse the flat key = value run configuration. '#' starts a comment.
/// Model keys use the exact physical-parameter names: N, delta, omega,
/// kappa, gamma_decay, w, dephasing, n_max.
inline RunConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::vector<std::string> order;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (kv.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = value;
        order.push_back(key);
    }

    RunConfig cfg;
    if (kv.count("preset")) detail::apply_preset(cfg, kv["preset"]);

    const std::set<std::string> known{
        "preset",      "N",          "delta",       "omega",       "kappa",
        "gamma_decay", "w",          "dephasing",   "n_max",       "mode",
        "t_final",     "dt_init",    "rel_tol",     "abs_tol",     "trunc_tol",
        "steady_method", "initial_state", "sweep_param", "sweep_values", "tau_max",
        "tau_points",  "stationarity_tol", "seed",   "sample_points", "output_dir",
        "format",      "quantities", "steady_residual_tol"};
    for (const auto& key : order)
        if (!known.count(key)) throw ConfigError("unknown key '" + key + "'");

    auto num = [&](const char* key, double& out) {
        if (kv.count(key)) out = detail::parse_double(key, kv[key]);
    };
    auto integer = [&](const char* key, int& out) {
        if (kv.count(key)) out = static_cast<int>(detail::parse_long(key, kv[key]));
    };

    integer("N", cfg.model.atoms);
    num("delta", cfg.model.delta);
    num("omega", cfg.model.omega);
    num("kappa", cfg.model.kappa);
    num("gamma_decay", cfg.model.gamma_decay);
    num("w", cfg.model.pump);
    num("dephasing", cfg.model.dephasing);
    integer("n_max", cfg.model.n_max);

    if (kv.count("mode")) {
        const std::string& m = kv["mode"];
        if (m == "evolve") cfg.mode = RunMode::Evolve;
        else if (m == "steady") cfg.mode = RunMode::Steady;
        else if (m == "sweep") cfg.mode = RunMode::Sweep;
        else if (m == "correlate") cfg.mode = RunMode::Correlate;
        else if (m == "oracle-check") cfg.mode = RunMode::OracleCheck;
        else throw ConfigError("unknown mode '" + m +
                               "' (evolve, steady, sweep, correlate, oracle-check)");
    }
    num("t_final", cfg.t_final);
    num("dt_init", cfg.tolerances.dt_init);
    num("rel_tol", cfg.tolerances.rel_tol);
    num("abs_tol", cfg.tolerances.abs_tol);
    num("trunc_tol", cfg.tolerances.trunc_tol);
    num("steady_residual_tol", cfg.tolerances.steady_residual_tol);
    num("tau_max", cfg.tau_max);
    num("stationarity_tol", cfg.stationarity_tol);
    integer("tau_points", cfg.tau_points);
    integer("sample_points", cfg.sample_points);
    if (kv.count("seed")) cfg.seed = static_cast<unsigned>(detail::parse_long("seed", kv["seed"]));

    if (kv.count("steady_method")) {
        const std::string& m = kv["steady_method"];
        if (m == "linear-solve") cfg.steady_method = SteadyMethod::LinearSolve;
        else if (m == "long-time") cfg.steady_method = SteadyMethod::LongTime;
        else throw ConfigError("unknown steady_method '" + m + "'");
    }
    if (kv.count("initial_state")) {
        const std::string& m = kv["initial_state"];
        if (m == "all-ground-vacuum") cfg.initial = InitialStateKind::AllGroundVacuum;
        else if (m == "all-excited-vacuum") cfg.initial = InitialStateKind::AllExcitedVacuum;
        else throw ConfigError("unknown initial_state '" + m + "'");
    }
    if (kv.count("sweep_param")) cfg.sweep_param = kv["sweep_param"];
    if (kv.count("sweep_values")) {
        cfg.sweep_values.clear();
        for (const auto& v : detail::split_list(kv["sweep_values"]))
            cfg.sweep_values.push_back(detail::parse_double("sweep_values", v));
    }
    if (kv.count("output_dir")) cfg.output_dir = kv["output_dir"];
    if (kv.count("format")) {
        const std::string& f = kv["format"];
        if (f == "csv") cfg.format = OutputFormat::Csv;
        else if (f == "json") cfg.format = OutputFormat::Json;
        else throw ConfigError("unknown format '" + f + "' (csv, json)");
    }
    if (kv.count("quantities")) {
        cfg.quantities = detail::split_list(kv["quantities"]);
        if (cfg.quantities.empty()) throw ConfigError("quantities list is empty");
    }
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

struct ValidationReport {
    std::int64_t basis_size = 0;
    std::int64_t state_entries = 0;
    double state_bytes = 0.0;
    std::vector<std::string> notes;
};

/// Schema and feasibility check without running anything.
inline ValidationReport validate_config(const RunConfig& cfg) {
    cfg.model.validate();
    cfg.tolerances.validate();

    for (const auto& q : cfg.quantities) {
        const auto& known = known_quantities();
        if (std::find(known.begin(), known.end(), q) == known.end()) {
            std::string names;
            for (const auto& k : known) names += (names.empty() ? "" : ", ") + k;
            throw ConfigError("unknown quantity '" + q + "' (valid: " + names + ")");
        }
    }
    if (cfg.mode == RunMode::Sweep) {
        static const std::set<std::string> sweepable{"delta", "omega", "kappa", "gamma_decay",
                                                     "w", "dephasing"};
        if (!sweepable.count(cfg.sweep_param))
            throw ConfigError("sweep_param '" + cfg.sweep_param +
                              "' must name a model rate (delta, omega, kappa, gamma_decay, w, "
                              "dephasing)");
        if (cfg.sweep_values.empty()) throw ConfigError("sweep mode needs sweep_values");
        for (double v : cfg.sweep_values)
            if (v < 0 && cfg.sweep_param != "delta")
                throw ConfigError("sweep value " + std::to_string(v) + " is negative");
    }
    if (cfg.mode == RunMode::Correlate) {
        if (cfg.tau_points < 4) throw ConfigError("tau_points must be at least 4");
        if (cfg.tau_max <= 0) throw ConfigError("tau_max must be positive");
    }

    ValidationReport rep;
    rep.basis_size = basis_dimension(cfg.model.atoms);
    rep.state_entries = cfg.model.state_dimension();
    rep.state_bytes = 16.0 * static_cast<double>(rep.state_entries);
    rep.notes.push_back("basis dimension " + std::to_string(rep.basis_size));
    rep.notes.push_back("state entries " + std::to_string(rep.state_entries) + " (" +
                        std::to_string(rep.state_bytes / 1048576.0) + " MiB complex)");
    return rep;
}

inline void set_model_param(ModelParams& p, const std::string& name, double value) {
    if (name == "delta") p.delta = value;
    else if (name == "omega") p.omega = value;
    else if (name == "kappa") p.kappa = value;
    else if (name == "gamma_decay") p.gamma_decay = value;
    else if (name == "w") p.pump = value;
    else if (name == "dephasing") p.dephasing = value;
    else throw ConfigError("cannot sweep parameter '" + name + "'");
}

}  // namespace su4
