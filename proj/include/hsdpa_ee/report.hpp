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

#ifndef HSDPA_EE_REPORT_HPP
#define HSDPA_EE_REPORT_HPP

#include "hsdpa_ee/sim_engine.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hsdpa_ee {

/// Malformed configuration text; carries the 1-based offending line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what);
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    Run,      ///< one trace per strategy
    Sweep,    ///< series over a sweep variable
    Shannon,  ///< analytic SE/EE curve, no simulation
};

struct ExperimentSpec {
    std::string name = "experiment";
    ExperimentKind kind = ExperimentKind::Run;
    ScenarioConfig scenario;
    std::vector<Strategy> run_strategies;  ///< Run: empty means scenario.strategy only
    SweepSpec sweep;
    std::vector<double> shannon_powers_dbm;  ///< Shannon: evaluation grid
    std::filesystem::path output_dir = ".";
};

/// Parses the sectioned `key = value` format. Relative table paths resolve
/// against `base_dir`. Throws ConfigError (line-numbered) or IoError.
ExperimentSpec parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
ExperimentSpec load_config(const std::filesystem::path& path);

std::vector<std::string> preset_names();
/// Throws std::invalid_argument for an unknown name.
ExperimentSpec preset(std::string_view name);

struct ShannonPoint {
    double power_dbm = 0.0;
    double se = 0.0;
    double ee = 0.0;
};
std::vector<ShannonPoint> shannon_curve(const ExperimentSpec& spec);

struct SeriesRow {
    std::string variable;
    double value = 0.0;
    std::string strategy;
    double mean_ee = 0.0;
    double std_ee = 0.0;
    double mean_reconfigs = 0.0;
    double mean_throughput = 0.0;
};

std::vector<SeriesRow> series_rows(SweepVariable variable, const std::vector<SeriesPoint>& points);
std::vector<SeriesRow> series_rows(const std::vector<ShannonPoint>& curve, double bandwidth_hz);

void write_trace_csv(std::ostream& os, std::string_view strategy, const std::vector<TtiRecord>& trace,
                     bool header = true);
void write_metrics_csv(std::ostream& os, const std::vector<std::pair<std::string, RunMetrics>>& rows);
void write_series_csv(std::ostream& os, const std::vector<SeriesRow>& rows);
std::vector<SeriesRow> read_series_csv(std::string_view text);

/// Moving average over `window` TTIs of per-TTI delivered bits over energy.
std::vector<double> smoothed_trace_ee(const std::vector<TtiRecord>& trace, int window);

struct CliOptions {
    std::optional<std::filesystem::path> config;
    std::optional<std::string> preset;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<int> duration;
    std::filesystem::path out = ".";
};

enum ExitCode : int { kExitOk = 0, kExitParse = 1, kExitInvalid = 2, kExitIo = 3 };

/// Writes trace.csv and metrics.csv into opts.out.
int cmd_run(const CliOptions& opts, std::ostream& out, std::ostream& err);
/// Writes series.csv into opts.out.
int cmd_sweep(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_tablegen(double step_db, int entries, const std::filesystem::path& out_path, std::ostream& out,
                 std::ostream& err);

}  // namespace hsdpa_ee

#endif
