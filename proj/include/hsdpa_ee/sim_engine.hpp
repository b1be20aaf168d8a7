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

#ifndef HSDPA_EE_SIM_ENGINE_HPP
#define HSDPA_EE_SIM_ENGINE_HPP

#include "hsdpa_ee/ee_controller.hpp"
#include "hsdpa_ee/link_channel.hpp"
#include "hsdpa_ee/mcs_table.hpp"
#include "hsdpa_ee/mimo_dtxaa.hpp"
#include "hsdpa_ee/power_model.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hsdpa_ee {

enum class AntennaMode { Siso, Simo, Mimo };
enum class Strategy { FixedBaseline, PerTtiOptimal, SemiStatic };

std::string_view to_string(AntennaMode mode);
std::string_view to_string(Strategy strategy);
/// Case-insensitive; throws std::invalid_argument on unknown names.
AntennaMode parse_antenna_mode(std::string_view name);
Strategy parse_strategy(std::string_view name);

struct ScenarioConfig {
    AntennaMode antenna_mode = AntennaMode::Simo;
    Strategy strategy = Strategy::SemiStatic;
    int duration_ttis = 10000;
    std::uint64_t seed = 1;
    LinkBudget link;
    ControllerConfig controller;
    PowerModelParams power_model;      ///< active_antennas is overridden by antenna_mode
    int feedback_delay_ttis = 3;
    double baseline_power_dbm = 40.5;
    double decode_margin_db = 0.0;
    int max_retransmissions = 3;       ///< re-attempts of a NACKed block before it is dropped
    bool soft_combining = true;        ///< re-attempts decode on the SINR summed over attempts
    DualOptions dual;
    std::shared_ptr<const McsTable> table;  ///< null selects default_table()

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;

    [[nodiscard]] const McsTable& mcs_table() const;
    [[nodiscard]] PowerModelParams effective_power_model() const;
    [[nodiscard]] ChannelParams channel() const;
};

enum class TtiOutcome { Idle, Ack, Nack };

struct TtiRecord {
    int tti = 0;
    double p_tx_dbm = 0.0;
    int mcs = 0;
    int mcs2 = 0;                      ///< second stream, 0 when single-stream
    TtiOutcome outcome = TtiOutcome::Idle;
    TtiOutcome outcome2 = TtiOutcome::Idle;
    double sinr_db = 0.0;              ///< primary stream SINR as received
    double delivered_bits = 0.0;
    double energy_j = 0.0;
    double delta_db = 0.0;             ///< outer-loop offset after this TTI's update
    bool reconfigured = false;
    bool retransmission = false;       ///< primary stream re-sent a NACKed block
};

struct RunMetrics {
    double avg_ee_bits_per_joule = 0.0;
    double throughput_bps = 0.0;
    int reconfig_count = 0;
    double nack_rate = 0.0;            ///< NACKs over first transmissions (the outer-loop target)
    double nack_rate_all = 0.0;        ///< NACKs over all transmissions, retransmissions included
    double total_bits = 0.0;
    double total_energy_j = 0.0;
    double mean_power_dbm = 0.0;
};

struct RunResult {
    RunMetrics metrics;
    std::vector<TtiRecord> trace;
};

/// Runs one scenario. Identical scenarios give bit-identical results.
RunResult run(const ScenarioConfig& scenario, bool keep_trace = true);

/// Recomputes aggregate metrics from a trace.
RunMetrics summarize(const std::vector<TtiRecord>& trace, double tti_ms);

enum class SweepVariable { Speed, Distance, ThetaMin, FixedPower, AntennaMode };

std::string_view to_string(SweepVariable variable);
/// Accepts speed, distance, theta_min, fixed_power and antenna_mode.
SweepVariable parse_sweep_variable(std::string_view name);

/// Writes `value` into the field selected by `variable`. Antenna modes are
/// numbered 0 (SISO), 1 (SIMO) and 2 (MIMO); fixed_power sets the baseline power.
void apply_sweep_value(ScenarioConfig& scenario, SweepVariable variable, double value);

struct SweepSpec {
    SweepVariable variable = SweepVariable::Speed;
    std::vector<double> values;
    int repetitions = 1;
    std::vector<Strategy> strategies = {Strategy::FixedBaseline, Strategy::PerTtiOptimal, Strategy::SemiStatic};
    std::vector<AntennaMode> modes;    ///< empty: the template's mode only
};

struct SeriesPoint {
    double value = 0.0;
    Strategy strategy = Strategy::SemiStatic;
    AntennaMode mode = AntennaMode::Simo;
    std::string label;                 ///< strategy, or strategy:mode with several modes
    std::vector<RunMetrics> reps;
    double mean_ee = 0.0;
    double std_ee = 0.0;               ///< sample standard deviation over repetitions
    double mean_reconfigs = 0.0;
    double mean_throughput = 0.0;
};

/// Runs every value x mode x strategy x repetition. Repetition r uses seed
/// derive_seed(template.seed, r) for all points, so strategies and values see
/// the same fading. Runs execute in parallel, capped by HSDPA_EE_THREADS.
std::vector<SeriesPoint> sweep(const ScenarioConfig& scenario, const SweepSpec& spec);

/// Worker count: HSDPA_EE_THREADS when set and positive, else the hardware count.
unsigned worker_threads();

}  // namespace hsdpa_ee

#endif
