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

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <iostream>

#include "su4/config.hpp"
#include "su4/runner.hpp"

namespace {

void apply_thread_env() {
    if (const char* threads = std::getenv("SU4SIM_THREADS")) {
        const int n = std::atoi(threads);
        if (n > 0) Eigen::setNbThreads(n);
    }
}

int do_run(const std::string& path) {
    su4::RunConfig cfg = su4::parse_config_file(path);
    su4::RunOutput out = su4::run(cfg);
    for (const auto& line : out.summary) std::cout << line << "\n";
    std::cout << "files written:\n";
    for (const auto& f : out.files) std::cout << "  " << f << "\n";
    return out.ok ? 0 : 1;
}

int do_validate(const std::string& path) {
    su4::RunConfig cfg = su4::parse_config_file(path);
    su4::ValidationReport rep = su4::validate_config(cfg);
    std::cout << "config OK\n";
    for (const auto& note : rep.notes) std::cout << "  " << note << "\n";
    return 0;
}

int do_oracle_check(int atoms, unsigned seed) {
    su4::RunConfig cfg;
    cfg.mode = su4::RunMode::OracleCheck;
    cfg.model.atoms = atoms;
    cfg.model.n_max = 6;
    cfg.seed = seed;
    cfg.output_dir = "out";
    su4::RunOutput out = su4::run(cfg);
    for (const auto& line : out.summary) std::cout << line << "\n";
    for (const auto& f : out.files) std::cout << "wrote " << f << "\n";
    return out.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_env();

    CLI::App app{
        "su4sim: permutation-symmetric Lindblad dynamics of N two-level atoms in a cavity"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "execute a run configuration");
    run_cmd->add_option("config", config_path, "path to the config file")->required();

    std::string validate_path;
    auto* val_cmd = app.add_subcommand("validate", "check a config and report resource needs");
    val_cmd->add_option("config", validate_path, "path to the config file")->required();

    int oc_atoms = 3;
    unsigned oc_seed = 42;
    auto* oc_cmd =
        app.add_subcommand("oracle-check", "compare against the brute-force reference");
    oc_cmd->add_option("--n", oc_atoms, "atom count (<= 4)")->required();
    oc_cmd->add_option("--seed", oc_seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return do_run(config_path);
        if (val_cmd->parsed()) return do_validate(validate_path);
        if (oc_cmd->parsed()) return do_oracle_check(oc_atoms, oc_seed);
    } catch (const su4::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
