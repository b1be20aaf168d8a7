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

#ifndef HSDPA_EE_MIMO_DTXAA_HPP
#define HSDPA_EE_MIMO_DTXAA_HPP

#include "hsdpa_ee/ee_controller.hpp"
#include "hsdpa_ee/link_channel.hpp"
#include "hsdpa_ee/mcs_table.hpp"
#include "hsdpa_ee/power_model.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace hsdpa_ee {

/// Primary stream uses (w1, w2), secondary stream (w3, w4).
struct PrecodingWeights {
    std::complex<double> w1;
    std::complex<double> w2;
    std::complex<double> w3;
    std::complex<double> w4;

    /// 2x2 precoding matrix with one column per stream.
    [[nodiscard]] Eigen::Matrix2cd matrix() const;
};

std::array<PrecodingWeights, 4> pci_codebook();

enum class StreamMode { Single, Dual };

struct MimoFeedback {
    StreamMode mode = StreamMode::Single;
    int pci = 0;
    int cqi_primary = 0;
    int cqi_secondary = 0;  ///< Dual only
};

/// Per-tap 2x2 fading matrices, rows indexed by receive antenna. Requires a
/// 2x2 ChannelState.
std::vector<Eigen::Matrix2cd> channel_matrices(const ChannelState& state);

/// Received SINR of the primary precoded stream carrying all of `p_hs_w`,
/// receive-combined over taps and antennas.
double single_stream_sinr_db(const std::vector<Eigen::Matrix2cd>& taps, const PrecodingWeights& w,
                             double p_hs_w, const ChannelParams& params);

/// Linear MMSE per-stream SINRs with `p_per_stream_w` on each stream.
std::pair<double, double> per_stream_sinr(const std::vector<Eigen::Matrix2cd>& taps,
                                          const PrecodingWeights& w, double p_per_stream_w,
                                          const ChannelParams& params);

/// Sum TBS of a hypothesis; a dual hypothesis with a zero CQI carries nothing.
int feedback_sum_tbs(const MimoFeedback& fb, const McsTable& table);

/// User-side choice over the 4 PCIs x {Single, Dual} maximizing the sum TBS.
/// Ties go to Single, then to the lower PCI.
MimoFeedback select_mode_and_feedback(const std::vector<Eigen::Matrix2cd>& taps, const McsTable& table,
                                      double p_hs_w, const ChannelParams& params);

/// All (j1, j2) with |(beta_j1 - beta_i1) - (beta_j2 - beta_i2)| <= tol_db.
std::vector<std::pair<int, int>> enumerate_equal_delta_pairs(int i1, int i2, const McsTable& table,
                                                             double tol_db = 0.0);

/// p_dbm + factor * (beta_j1 - beta_i1) + delta_db. A factor of 1 applies the
/// shift once.
double estimate_dual_power(double p_dbm, int i1, int j1, const McsTable& table, double delta_db,
                           double factor = 2.0);

/// Estimated sum EE of a stream pair; the power model always counts two chains.
double estimate_dual_ee(double p_dbm, int j1, int j2, const McsTable& table, const PowerModelParams& pm,
                        double tti_ms);

struct DualSelection {
    int theta1 = 0;
    int theta2 = 0;
    double power_dbm = 0.0;
    double ee = 0.0;
    bool feasible = true;
};

struct DualOptions {
    double pair_tolerance_db = 0.0;
    double power_factor = 2.0;
};

/// Sum-EE maximization over the equal-delta pairs of a dual report, clamped
/// like select_optimal along the pair ordering by threshold shift.
DualSelection select_optimal_dual(double p_dbm, const MimoFeedback& feedback, double delta_db,
                                  const McsTable& table, const ControllerConfig& cfg,
                                  const PowerModelParams& pm, const DualOptions& opts = {});

/// What reaches the Node B in one TTI on a D-TxAA link.
struct MimoReport {
    std::optional<MimoFeedback> feedback;
    double reference_power_dbm = 0.0;
    std::optional<HarqReport> harq;
    std::optional<HarqReport> harq2;
};

/// Dual-stream counterpart of on_tti. Single-mode reports follow the
/// single-stream path with two active chains in the power model.
TtiStep on_tti_mimo(ControllerState state, const MimoReport& report, const McsTable& table,
                    const ControllerConfig& cfg, const PowerModelParams& pm,
                    TriggerPolicy policy = TriggerPolicy::DualTrigger, const DualOptions& opts = {});

}  // namespace hsdpa_ee

#endif
