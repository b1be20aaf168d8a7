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

#ifndef HSDPA_EE_EE_CONTROLLER_HPP
#define HSDPA_EE_EE_CONTROLLER_HPP

#include "hsdpa_ee/link_channel.hpp"
#include "hsdpa_ee/mcs_table.hpp"
#include "hsdpa_ee/power_model.hpp"

#include <optional>

namespace hsdpa_ee {

/// Semi-static controller configuration. Times are in milliseconds.
struct ControllerConfig {
    double p_max_dbm = 43.0;
    int theta_min = 1;               ///< lowest CQI/MCS the user accepts
    double delta_threshold = 0.2;    ///< event-trigger level on the relative EE gap
    double gamma_prohibit_ms = 20.0;
    double gamma_periodic_ms = 200.0;
    double tti_ms = 2.0;
    double bler_target = 0.1;
    double offset_step_down_db = 0.05;  ///< applied on ACK
    double offset_step_up_db = 0.45;    ///< applied on NACK
    double offset_clamp_db = 6.0;
    double ee_smoothing = 0.05;         ///< EWMA weight of the newest realized-EE sample

    void validate() const;

    /// Step-up chosen as step_down * (1 - target) / target, the ratio at which
    /// the ACK/NACK jump loop settles on the target NACK rate.
    void set_offset_steps(double step_down_db);
};

struct ControllerState {
    double p_current_dbm = 40.5;
    int current_mcs = 0;
    int current_mcs2 = 0;
    double delta_db = 0.0;
    double timer_ms = 0.0;
    double last_ee = 0.0;       ///< smoothed realized EE [bit/J]
    bool ee_valid = false;      ///< false until the first realized sample
};

/// Initial state: baseline power, zero offset and an expired timer so the
/// first usable report triggers an optimization.
ControllerState initial_state(double power_dbm, const ControllerConfig& cfg);

enum class Action { Keep, Reconfigure };

struct ControllerDecision {
    Action action = Action::Keep;
    double new_power_dbm = 0.0;
    int new_mcs = 0;             ///< 0: nothing is served this TTI
    int new_mcs2 = 0;            ///< secondary stream, 0 in single-stream operation
    double estimated_ee = 0.0;
};

/// Outcome of a past transmission as learned from the ACK/NACK channel.
struct HarqReport {
    HarqOutcome outcome = HarqOutcome::Ack;
    double delivered_bits = 0.0;
    double energy_j = 0.0;
    bool first_attempt = true;   ///< retransmission outcomes do not move the offset
};

/// What reaches the Node B in one TTI on a single-stream link.
struct SisoFeedback {
    std::optional<int> cqi;            ///< nullopt before the first report
    double reference_power_dbm = 0.0;  ///< transmit power the CQI was measured at
    std::optional<HarqReport> harq;
};

enum class TriggerPolicy {
    DualTrigger,  ///< event + periodic trigger
    EveryTti,     ///< re-optimize whenever a report is available
};

struct TtiStep {
    ControllerState state;
    ControllerDecision decision;
};

/// P_j = P + beta_j - beta_i + delta (dBm). Requires a valid fed-back CQI i.
double estimate_power_for_mcs(double p_dbm, int feedback_cqi, int target_cqi,
                              const McsTable& table, double delta_db);

/// Estimated EE of transmitting tbs_bits at power p_j_dbm for one TTI.
double estimate_ee(double p_j_dbm, int tbs_bits, const PowerModelParams& pm, double tti_ms);

struct Selection {
    int theta = 0;             ///< constrained optimal CQI
    double power_dbm = 0.0;    ///< constrained optimal transmit power
    double ee = 0.0;           ///< estimated EE of (theta, power)
    int best_index = 0;        ///< unconstrained argmax j*
    double best_power_dbm = 0.0;
    int theta_max = 0;         ///< largest CQI reachable within p_max
    double p_min_dbm = 0.0;    ///< estimated power for theta_min
    bool feasible = true;      ///< false when theta_min needs more than p_max
};

/// Scans every table row, picks the EE-maximizing row (lowest index on ties)
/// and clamps it to [theta_min, theta_max] / [P_min, P_max]. When theta_min
/// cannot be reached within p_max the result is (theta_max, p_max) with
/// `feasible == false`.
Selection select_optimal(double p_dbm, int feedback_cqi, double delta_db, const McsTable& table,
                         const ControllerConfig& cfg, const PowerModelParams& pm);

/// (xi_opt - xi) / xi_opt
double relative_ee_difference(double xi_opt, double xi);

bool should_trigger(double relative_gap, double timer_ms, const ControllerConfig& cfg);

/// Outer-loop offset: up on NACK, down on ACK, clamped.
ControllerState update_offset(ControllerState state, HarqOutcome outcome, const ControllerConfig& cfg);

/// CQI supportable at `power_dbm` given a report of `feedback_cqi` measured at
/// `reference_power_dbm`, backed off by the outer-loop offset.
int amc_cqi(int feedback_cqi, double reference_power_dbm, double power_dbm, double delta_db,
            const McsTable& table);

/// One controller iteration for a single-stream link: advance the timer, apply
/// the ACK/NACK offset update, estimate the optimum and evaluate the trigger.
TtiStep on_tti(ControllerState state, const SisoFeedback& feedback, const McsTable& table,
               const ControllerConfig& cfg, const PowerModelParams& pm,
               TriggerPolicy policy = TriggerPolicy::DualTrigger);

namespace detail {

struct Proposal {
    int mcs = 0;
    int mcs2 = 0;
    double power_dbm = 0.0;
    double ee = 0.0;
};

/// Timer advance, offset update and realized-EE smoothing.
ControllerState begin_tti(ControllerState state, const std::optional<HarqReport>& harq,
                          const ControllerConfig& cfg);

/// Trigger evaluation shared by the single- and dual-stream controllers.
/// `optimum` is empty when the report carried no usable CQI.
TtiStep finish_tti(ControllerState state, const std::optional<Proposal>& optimum, int keep_mcs,
                   int keep_mcs2, bool have_report, const ControllerConfig& cfg, TriggerPolicy policy);

}  // namespace detail

}  // namespace hsdpa_ee

#endif
