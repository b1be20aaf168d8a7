// SPDX-License-Identifier: Apache-2.0
//
// hsdpa-ee: energy-efficient power control and link adaptation for HSDPA links
// Copyright (C) 2026 The hsdpa-ee authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hsdpa_ee/report.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common(CLI::App* cmd, std::string& config, std::string& preset_name,
                std::uint64_t& seed, int& reps, int& duration, std::string& out)
{
    cmd->add_option("--config", config, "Scenario configuration file");
    cmd->add_option("--preset", preset_name, "Built-in experiment (figure1 ... figure11)");
    cmd->add_option("--seed", seed, "Base random seed");
    cmd->add_option("--reps", reps, "Repetitions per sweep point")->check(CLI::PositiveNumber);
    cmd->add_option("--duration", duration, "Run length in TTIs")->check(CLI::PositiveNumber);
    cmd->add_option("--out", out, "Output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Energy-efficient power control and link adaptation simulator for HSDPA"};
    app.require_subcommand(1);

    hsdpa_ee::CliOptions opts;
    std::string config;
    std::string preset_name;
    std::uint64_t seed = 0;
    int reps = 0;
    int duration = 0;
    std::string out = ".";

    auto* run_cmd = app.add_subcommand("run", "Run one scenario; writes trace.csv and metrics.csv");
    add_common(run_cmd, config, preset_name, seed, reps, duration, out);
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep; writes series.csv");
    add_common(sweep_cmd, config, preset_name, seed, reps, duration, out);

    double step_db = 1.0;
    int entries = 30;
    std::string table_out = "mcs_table.csv";
    auto* table_cmd = app.add_subcommand("tablegen", "Write the synthetic MCS table as CSV");
    table_cmd->add_option("--step", step_db, "Threshold spacing in dB")->capture_default_str();
    table_cmd->add_option("--entries", entries, "Number of CQI rows")->capture_default_str();
    table_cmd->add_option("--out", table_out, "Output file")->capture_default_str();

    auto* list_cmd = app.add_subcommand("presets", "List the built-in experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : hsdpa_ee::kExitParse;
    }

    auto fill = [&](CLI::App* cmd) {
        if (cmd->count("--config") > 0)
            opts.config = config;
        if (cmd->count("--preset") > 0)
            opts.preset = preset_name;
        if (cmd->count("--seed") > 0)
            opts.seed = seed;
        if (cmd->count("--reps") > 0)
            opts.reps = reps;
        if (cmd->count("--duration") > 0)
            opts.duration = duration;
        opts.out = out;
    };

    if (run_cmd->parsed()) {
        fill(run_cmd);
        return hsdpa_ee::cmd_run(opts, std::cout, std::cerr);
    }
    if (sweep_cmd->parsed()) {
        fill(sweep_cmd);
        return hsdpa_ee::cmd_sweep(opts, std::cout, std::cerr);
    }
    if (table_cmd->parsed())
        return hsdpa_ee::cmd_tablegen(step_db, entries, table_out, std::cout, std::cerr);
    if (list_cmd->parsed()) {
        for (const auto& name : hsdpa_ee::preset_names())
            std::cout << name << "\n";
        return 0;
    }
    return 0;
}
