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

#include "hsdpa_ee/mimo_dtxaa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hsdpa_ee {

namespace {

using cd = std::complex<double>;

// Absorbs rounding in threshold differences of tables given in decimal text.
constexpr double kPairSlackDb = 1e-9;

// SF * path gain / (I + N): the factor turning stream power into SNR at the
// receiver input.
double snr_scale(const ChannelParams& params)
{
    return params.sf * db_to_linear(path_gain_db(params.distance_m)) / params.interference_plus_noise_w();
}

Eigen::Matrix2cd gram(const std::vector<Eigen::Matrix2cd>& taps, const Eigen::Matrix2cd& w)
{
    Eigen::Matrix2cd g = Eigen::Matrix2cd::Zero();
    for (const auto& h : taps) {
        const Eigen::Matrix2cd hw = h * w;
        g += hw.adjoint() * hw;
    }
    return g;
}

int tbs_or_zero(int cqi, const McsTable& table)
{
    return table.valid_cqi(cqi) ? table.tbs_bits(cqi) : 0;
}

}  // namespace

Eigen::Matrix2cd PrecodingWeights::matrix() const
{
    Eigen::Matrix2cd m;
    m << w1, w3, w2, w4;
    return m;
}

std::array<PrecodingWeights, 4> pci_codebook()
{
    const double a = 1.0 / std::sqrt(2.0);
    const std::array<cd, 4> w2 = {cd(0.5, 0.5), cd(0.5, -0.5), cd(-0.5, 0.5), cd(-0.5, -0.5)};
    std::array<PrecodingWeights, 4> book;
    for (std::size_t k = 0; k < book.size(); ++k)
        book[k] = {cd(a, 0.0), w2[k], cd(a, 0.0), -w2[k]};
    return book;
}

std::vector<Eigen::Matrix2cd> channel_matrices(const ChannelState& state)
{
    if (state.tx() != 2 || state.rx() != 2)
        throw std::invalid_argument("channel_matrices: a 2x2 channel state is required");
    std::vector<Eigen::Matrix2cd> out(static_cast<std::size_t>(state.taps()));
    for (int tap = 0; tap < state.taps(); ++tap)
        for (int r = 0; r < 2; ++r)
            for (int t = 0; t < 2; ++t)
                out[static_cast<std::size_t>(tap)](r, t) = state.gain(tap, r, t);
    return out;
}

double single_stream_sinr_db(const std::vector<Eigen::Matrix2cd>& taps, const PrecodingWeights& w,
                             double p_hs_w, const ChannelParams& params)
{
    if (!(p_hs_w >= 0.0))
        throw std::invalid_argument("single_stream_sinr_db: power must be non-negative");
    const Eigen::Vector2cd v(w.w1, w.w2);
    double g = 0.0;
    for (const auto& h : taps)
        g += (h * v).squaredNorm();
    return linear_to_db(p_hs_w * snr_scale(params) * g);
}

std::pair<double, double> per_stream_sinr(const std::vector<Eigen::Matrix2cd>& taps,
                                          const PrecodingWeights& w, double p_per_stream_w,
                                          const ChannelParams& params)
{
    if (!(p_per_stream_w >= 0.0))
        throw std::invalid_argument("per_stream_sinr: power must be non-negative");
    const double rho = p_per_stream_w * snr_scale(params);
    const Eigen::Matrix2cd a = Eigen::Matrix2cd::Identity() + rho * gram(taps, w.matrix());
    const Eigen::Matrix2cd inv = a.inverse();
    // 1 / [(I + rho G)^-1]_kk - 1 is the unbiased MMSE output SINR of stream k
    const double s1 = 1.0 / inv(0, 0).real() - 1.0;
    const double s2 = 1.0 / inv(1, 1).real() - 1.0;
    return {linear_to_db(std::max(s1, 0.0)), linear_to_db(std::max(s2, 0.0))};
}

int feedback_sum_tbs(const MimoFeedback& fb, const McsTable& table)
{
    if (fb.mode == StreamMode::Single)
        return tbs_or_zero(fb.cqi_primary, table);
    if (!table.valid_cqi(fb.cqi_primary) || !table.valid_cqi(fb.cqi_secondary))
        return 0;
    return table.tbs_bits(fb.cqi_primary) + table.tbs_bits(fb.cqi_secondary);
}

MimoFeedback select_mode_and_feedback(const std::vector<Eigen::Matrix2cd>& taps, const McsTable& table,
                                      double p_hs_w, const ChannelParams& params)
{
    const auto book = pci_codebook();
    MimoFeedback best;
    best.cqi_primary = cqi_from_sinr(single_stream_sinr_db(taps, book[0], p_hs_w, params), table);
    int best_tbs = feedback_sum_tbs(best, table);

    for (int k = 1; k < 4; ++k) {
        MimoFeedback fb;
        fb.pci = k;
        fb.cqi_primary = cqi_from_sinr(single_stream_sinr_db(taps, book[static_cast<std::size_t>(k)], p_hs_w, params), table);
        const int tbs = feedback_sum_tbs(fb, table);
        if (tbs > best_tbs) {
            best = fb;
            best_tbs = tbs;
        }
    }
    for (int k = 0; k < 4; ++k) {
        const auto [s1, s2] = per_stream_sinr(taps, book[static_cast<std::size_t>(k)], 0.5 * p_hs_w, params);
        MimoFeedback fb;
        fb.mode = StreamMode::Dual;
        fb.pci = k;
        fb.cqi_primary = cqi_from_sinr(s1, table);
        fb.cqi_secondary = cqi_from_sinr(s2, table);
        if (fb.cqi_primary == 0 || fb.cqi_secondary == 0)
            continue;
        const int tbs = feedback_sum_tbs(fb, table);
        if (tbs > best_tbs) {
            best = fb;
            best_tbs = tbs;
        }
    }
    return best;
}

std::vector<std::pair<int, int>> enumerate_equal_delta_pairs(int i1, int i2, const McsTable& table, double tol_db)
{
    if (!table.valid_cqi(i1) || !table.valid_cqi(i2))
        throw std::invalid_argument("enumerate_equal_delta_pairs: invalid fed-back CQI");
    if (!(tol_db >= 0.0))
        throw std::invalid_argument("enumerate_equal_delta_pairs: tolerance must be non-negative");
    std::vector<std::pair<int, int>> pairs;
    for (int j1 = 1; j1 <= table.max_cqi(); ++j1) {
        const double d1 = threshold_delta(i1, j1, table);
        for (int j2 = 1; j2 <= table.max_cqi(); ++j2) {
            const double d2 = threshold_delta(i2, j2, table);
            if (std::abs(d1 - d2) <= tol_db + kPairSlackDb)
                pairs.emplace_back(j1, j2);
        }
    }
    return pairs;
}

double estimate_dual_power(double p_dbm, int i1, int j1, const McsTable& table, double delta_db, double factor)
{
    if (!table.valid_cqi(i1) || !table.valid_cqi(j1))
        throw std::invalid_argument("estimate_dual_power: invalid CQI");
    return p_dbm + factor * threshold_delta(i1, j1, table) + delta_db;
}

double estimate_dual_ee(double p_dbm, int j1, int j2, const McsTable& table, const PowerModelParams& pm,
                        double tti_ms)
{
    PowerModelParams dual = pm;
    dual.active_antennas = 2;
    const int tbs = tbs_or_zero(j1, table) + tbs_or_zero(j2, table);
    if (tbs <= 0)
        return 0.0;
    return estimate_ee(p_dbm, tbs, dual, tti_ms);
}

DualSelection select_optimal_dual(double p_dbm, const MimoFeedback& feedback, double delta_db,
                                  const McsTable& table, const ControllerConfig& cfg,
                                  const PowerModelParams& pm, const DualOptions& opts)
{
    if (feedback.mode != StreamMode::Dual)
        throw std::invalid_argument("select_optimal_dual: dual-mode feedback required");
    const int i1 = feedback.cqi_primary;
    const int i2 = feedback.cqi_secondary;

    struct Candidate {
        int j1;
        int j2;
        double shift;
        double power;
        double ee;
    };
    std::vector<Candidate> cands;
    for (const auto& [j1, j2] : enumerate_equal_delta_pairs(i1, i2, table, opts.pair_tolerance_db)) {
        // mean of the two stream shifts
        const double shift = 0.5 * (threshold_delta(i1, j1, table) + threshold_delta(i2, j2, table));
        const double power = p_dbm + opts.power_factor * shift + delta_db;
        cands.push_back({j1, j2, shift, power, estimate_dual_ee(power, j1, j2, table, pm, cfg.tti_ms)});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return a.shift < b.shift;
    });

    std::size_t best = 0;
    std::optional<std::size_t> pos_max;
    std::optional<std::size_t> pos_min;
    for (std::size_t k = 0; k < cands.size(); ++k) {
        if (cands[k].ee > cands[best].ee)
            best = k;
        if (cands[k].power <= cfg.p_max_dbm + kPairSlackDb)
            pos_max = k;
        if (!pos_min && std::min(cands[k].j1, cands[k].j2) >= cfg.theta_min)
            pos_min = k;
    }

    DualSelection sel;
    sel.feasible = pos_max && pos_min && *pos_min <= *pos_max;
    const std::size_t lo = pos_min.value_or(cands.size() - 1);
    const std::size_t hi = pos_max.value_or(0);
    const std::size_t pick = std::min(std::max(lo, best), hi);
    sel.theta1 = cands[pick].j1;
    sel.theta2 = cands[pick].j2;
    sel.power_dbm = std::min(std::max(cands[lo].power, cands[best].power), cfg.p_max_dbm);
    sel.ee = estimate_dual_ee(sel.power_dbm, sel.theta1, sel.theta2, table, pm, cfg.tti_ms);
    return sel;
}

TtiStep on_tti_mimo(ControllerState state, const MimoReport& report, const McsTable& table,
                    const ControllerConfig& cfg, const PowerModelParams& pm, TriggerPolicy policy,
                    const DualOptions& opts)
{
    PowerModelParams dual_pm = pm;
    dual_pm.active_antennas = 2;

    std::optional<HarqReport> merged = report.harq;
    if (merged && report.harq2)
        merged->delivered_bits += report.harq2->delivered_bits;
    state = detail::begin_tti(state, merged, cfg);
    if (report.harq2 && report.harq2->first_attempt)
        state = update_offset(state, report.harq2->outcome, cfg);

    if (!report.feedback)
        return detail::finish_tti(state, std::nullopt, 0, 0, false, cfg, policy);

    const MimoFeedback& fb = *report.feedback;
    const double ref = report.reference_power_dbm;
    auto keep_cqi = [&](int cqi) {
        int c = amc_cqi(cqi, ref, state.p_current_dbm, state.delta_db, table);
        if (c > 0)
            c = std::max(c, std::min(cfg.theta_min, table.max_cqi()));
        return c;
    };

    if (fb.mode == StreamMode::Single || !table.valid_cqi(fb.cqi_secondary)) {
        if (!table.valid_cqi(fb.cqi_primary))
            return detail::finish_tti(state, std::nullopt, 0, 0, true, cfg, policy);
        const Selection sel = select_optimal(ref, fb.cqi_primary, state.delta_db, table, cfg, dual_pm);
        const detail::Proposal optimum{sel.theta, 0, sel.power_dbm, sel.ee};
        return detail::finish_tti(state, optimum, keep_cqi(fb.cqi_primary), 0, true, cfg, policy);
    }

    const DualSelection sel = select_optimal_dual(ref, fb, state.delta_db, table, cfg, dual_pm, opts);
    const detail::Proposal optimum{sel.theta1, sel.theta2, sel.power_dbm, sel.ee};
    return detail::finish_tti(state, optimum, keep_cqi(fb.cqi_primary), keep_cqi(fb.cqi_secondary), true, cfg,
                              policy);
}

}  // namespace hsdpa_ee
