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

#include "hsdpa_ee/ee_controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsdpa_ee {

namespace {

// Slack for comparing dBm values that went through additions of table deltas.
constexpr double kPowerEpsDb = 1e-9;

}  // namespace

void ControllerConfig::validate() const
{
    if (!std::isfinite(p_max_dbm))
        throw std::invalid_argument("controller: p_max must be finite");
    if (theta_min < 1)
        throw std::invalid_argument("controller: theta_min must be >= 1");
    if (!(delta_threshold > 0.0 && delta_threshold < 1.0))
        throw std::invalid_argument("controller: trigger threshold must lie in (0, 1)");
    if (!(tti_ms > 0.0))
        throw std::invalid_argument("controller: TTI duration must be positive");
    if (!(gamma_prohibit_ms >= 0.0))
        throw std::invalid_argument("controller: prohibit interval must be non-negative");
    if (!(gamma_periodic_ms >= 5.0 * gamma_prohibit_ms) || !(gamma_periodic_ms > 0.0))
        throw std::invalid_argument("controller: periodic interval must be at least 5x the prohibit interval");
    if (!(bler_target > 0.0 && bler_target < 1.0))
        throw std::invalid_argument("controller: BLER target must lie in (0, 1)");
    if (!(offset_step_up_db >= 0.0) || !(offset_step_down_db >= 0.0))
        throw std::invalid_argument("controller: offset steps must be non-negative");
    if (!(offset_clamp_db >= 0.0))
        throw std::invalid_argument("controller: offset clamp must be non-negative");
    if (!(ee_smoothing > 0.0 && ee_smoothing <= 1.0))
        throw std::invalid_argument("controller: EE smoothing factor must lie in (0, 1]");
}

void ControllerConfig::set_offset_steps(double step_down_db)
{
    offset_step_down_db = step_down_db;
    offset_step_up_db = step_down_db * (1.0 - bler_target) / bler_target;
}

ControllerState initial_state(double power_dbm, const ControllerConfig& cfg)
{
    ControllerState s;
    s.p_current_dbm = std::min(power_dbm, cfg.p_max_dbm);
    s.timer_ms = cfg.gamma_periodic_ms;
    return s;
}

double estimate_power_for_mcs(double p_dbm, int feedback_cqi, int target_cqi,
                              const McsTable& table, double delta_db)
{
    if (!table.valid_cqi(feedback_cqi))
        throw std::invalid_argument("estimate_power_for_mcs: no estimate without a valid fed-back CQI");
    if (!table.valid_cqi(target_cqi))
        throw std::invalid_argument("estimate_power_for_mcs: invalid target CQI");
    return p_dbm + threshold_delta(feedback_cqi, target_cqi, table) + delta_db;
}

double estimate_ee(double p_j_dbm, int tbs_bits, const PowerModelParams& pm, double tti_ms)
{
    if (tbs_bits <= 0)
        throw std::invalid_argument("estimate_ee: transport block size must be positive");
    if (!(tti_ms > 0.0))
        throw std::invalid_argument("estimate_ee: TTI duration must be positive");
    return tbs_bits / (tti_ms * 1e-3 * total_power(dbm_to_watt(p_j_dbm), pm));
}

Selection select_optimal(double p_dbm, int feedback_cqi, double delta_db, const McsTable& table,
                         const ControllerConfig& cfg, const PowerModelParams& pm)
{
    if (!table.valid_cqi(feedback_cqi))
        throw std::invalid_argument("select_optimal: fed-back CQI must be a valid index");
    if (cfg.theta_min > table.max_cqi())
        throw std::invalid_argument("select_optimal: theta_min exceeds the table");

    Selection sel;
    double best_ee = -1.0;
    sel.theta_max = 0;
    for (int j = 1; j <= table.max_cqi(); ++j) {
        const double p_j = estimate_power_for_mcs(p_dbm, feedback_cqi, j, table, delta_db);
        const double ee_j = estimate_ee(p_j, table.tbs_bits(j), pm, cfg.tti_ms);
        if (ee_j > best_ee) {
            best_ee = ee_j;
            sel.best_index = j;
            sel.best_power_dbm = p_j;
        }
        if (p_j <= cfg.p_max_dbm + kPowerEpsDb)
            sel.theta_max = j;
    }
    sel.p_min_dbm = estimate_power_for_mcs(p_dbm, feedback_cqi, cfg.theta_min, table, delta_db);
    sel.feasible = sel.theta_max >= cfg.theta_min;
    if (sel.theta_max == 0)
        sel.theta_max = 1;  // nothing fits; lowest MCS at full power

    sel.theta = std::min(std::max(cfg.theta_min, sel.best_index), sel.theta_max);
    sel.power_dbm = std::min(std::max(sel.p_min_dbm, sel.best_power_dbm), cfg.p_max_dbm);
    sel.ee = estimate_ee(sel.power_dbm, table.tbs_bits(sel.theta), pm, cfg.tti_ms);
    return sel;
}

double relative_ee_difference(double xi_opt, double xi)
{
    if (!(xi_opt > 0.0))
        throw std::invalid_argument("relative_ee_difference: optimal EE must be positive");
    return (xi_opt - xi) / xi_opt;
}

bool should_trigger(double relative_gap, double timer_ms, const ControllerConfig& cfg)
{
    if (!(timer_ms >= 0.0))
        throw std::invalid_argument("should_trigger: timer must be non-negative");
    const bool event = relative_gap >= cfg.delta_threshold && timer_ms > cfg.gamma_prohibit_ms;
    const bool periodic = timer_ms > cfg.gamma_periodic_ms;
    return event || periodic;
}

ControllerState update_offset(ControllerState state, HarqOutcome outcome, const ControllerConfig& cfg)
{
    if (outcome == HarqOutcome::Nack)
        state.delta_db += cfg.offset_step_up_db;
    else
        state.delta_db -= cfg.offset_step_down_db;
    state.delta_db = std::clamp(state.delta_db, -cfg.offset_clamp_db, cfg.offset_clamp_db);
    return state;
}

int amc_cqi(int feedback_cqi, double reference_power_dbm, double power_dbm, double delta_db,
            const McsTable& table)
{
    if (!table.valid_cqi(feedback_cqi))
        return 0;
    const double sinr_estimate =
        table.threshold_db(feedback_cqi) + (power_dbm - reference_power_dbm) - delta_db;
    return cqi_from_sinr(sinr_estimate + kPowerEpsDb, table);
}

namespace detail {

ControllerState begin_tti(ControllerState state, const std::optional<HarqReport>& harq,
                          const ControllerConfig& cfg)
{
    state.timer_ms += cfg.tti_ms;
    if (!harq)
        return state;
    if (harq->first_attempt)
        state = update_offset(state, harq->outcome, cfg);
    if (harq->energy_j > 0.0) {
        const double sample = harq->delivered_bits / harq->energy_j;
        if (state.ee_valid) {
            state.last_ee += cfg.ee_smoothing * (sample - state.last_ee);
        } else {
            state.last_ee = sample;
            state.ee_valid = true;
        }
    }
    return state;
}

TtiStep finish_tti(ControllerState state, const std::optional<Proposal>& optimum, int keep_mcs,
                   int keep_mcs2, bool have_report, const ControllerConfig& cfg, TriggerPolicy policy)
{
    ControllerDecision keep;
    keep.action = Action::Keep;
    keep.new_power_dbm = state.p_current_dbm;

    if (!have_report)
        return {state, keep};

    auto reconfigure = [&](int mcs, int mcs2, double power_dbm, double ee) {
        state.p_current_dbm = power_dbm;
        state.current_mcs = mcs;
        state.current_mcs2 = mcs2;
        state.timer_ms = 0.0;
        ControllerDecision d;
        d.action = Action::Reconfigure;
        d.new_power_dbm = power_dbm;
        d.new_mcs = mcs;
        d.new_mcs2 = mcs2;
        d.estimated_ee = ee;
        return TtiStep{state, d};
    };

    if (!optimum) {
        // Out-of-range CQI: nothing to estimate from. Hold, except that the
        // periodic trigger still fires and probes theta_min at full power.
        if (state.timer_ms > cfg.gamma_periodic_ms)
            return reconfigure(cfg.theta_min, 0, cfg.p_max_dbm, 0.0);
        state.current_mcs = 0;
        state.current_mcs2 = 0;
        return {state, keep};
    }

    bool fire = policy == TriggerPolicy::EveryTti;
    if (!fire) {
        const double gap = state.ee_valid && optimum->ee > 0.0 ? relative_ee_difference(optimum->ee, state.last_ee)
                                                               : 0.0;
        fire = should_trigger(gap, state.timer_ms, cfg);
    }
    if (fire)
        return reconfigure(optimum->mcs, optimum->mcs2, optimum->power_dbm, optimum->ee);

    state.current_mcs = keep_mcs;
    state.current_mcs2 = keep_mcs2;
    keep.new_mcs = keep_mcs;
    keep.new_mcs2 = keep_mcs2;
    return {state, keep};
}

}  // namespace detail

TtiStep on_tti(ControllerState state, const SisoFeedback& feedback, const McsTable& table,
               const ControllerConfig& cfg, const PowerModelParams& pm, TriggerPolicy policy)
{
    state = detail::begin_tti(state, feedback.harq, cfg);
    if (!feedback.cqi)
        return detail::finish_tti(state, std::nullopt, 0, 0, false, cfg, policy);

    const int cqi = *feedback.cqi;
    if (!table.valid_cqi(cqi))
        return detail::finish_tti(state, std::nullopt, 0, 0, true, cfg, policy);

    const Selection sel = select_optimal(feedback.reference_power_dbm, cqi, state.delta_db, table, cfg, pm);
    const detail::Proposal optimum{sel.theta, 0, sel.power_dbm, sel.ee};

    int keep_mcs = amc_cqi(cqi, feedback.reference_power_dbm, state.p_current_dbm, state.delta_db, table);
    if (keep_mcs > 0)
        keep_mcs = std::max(keep_mcs, std::min(cfg.theta_min, table.max_cqi()));
    return detail::finish_tti(state, optimum, keep_mcs, 0, true, cfg, policy);
}

}  // namespace hsdpa_ee
