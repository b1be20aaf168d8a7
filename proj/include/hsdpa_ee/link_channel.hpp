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

#ifndef HSDPA_EE_LINK_CHANNEL_HPP
#define HSDPA_EE_LINK_CHANNEL_HPP

#include "hsdpa_ee/mcs_table.hpp"
#include "hsdpa_ee/rng.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace hsdpa_ee {

struct PdpTap {
    double delay_s = 0.0;
    double power_db = 0.0;
};

/// ITU Pedestrian-A: 4 taps at 0/110/190/410 ns, 0/-9.7/-19.2/-22.8 dB.
std::vector<PdpTap> pedestrian_a_profile();

/// Inputs of the HS-PDSCH SINR expression plus the fading configuration.
struct ChannelParams {
    double sf = 16.0;             ///< spreading factor
    double alpha = 1.0;           ///< orthogonality factor in [0, 1]
    double i_or_w = 0.0;          ///< received serving-cell power [W]
    double i_oc_w = 0.0;          ///< inter-cell interference [W]
    double n0_w_per_hz = 1e-20;   ///< noise density [W/Hz]
    double bandwidth_hz = 5e6;
    double speed_kmh = 3.0;
    double carrier_hz = 2.14e9;
    std::vector<PdpTap> pdp = pedestrian_a_profile();
    double distance_m = 1000.0;
    int tx_antennas = 1;
    int rx_antennas = 1;
    int sinusoids = 256;          ///< oscillators per fading coefficient

    void validate() const;

    [[nodiscard]] double doppler_hz() const;
    /// (1 - alpha) I_or + I_oc + N0 W
    [[nodiscard]] double interference_plus_noise_w() const;
    /// Linear tap powers normalized to unit sum.
    [[nodiscard]] std::vector<double> tap_weights() const;
};

/// Deployment-level description from which ChannelParams are derived.
///
/// The serving-cell power received by the user is the cell transmit power
/// attenuated by the path loss. Inter-cell interference is a constant chosen so
/// that the geometry I_or / (I_oc + N0 W) equals `geometry_db` at
/// `geometry_ref_distance_m`; users closer than the reference distance see a
/// higher geometry, users further away a lower one.
struct LinkBudget {
    double distance_m = 300.0;
    double speed_kmh = 3.0;
    double carrier_hz = 2.14e9;
    double bandwidth_hz = 5e6;
    double sf = 16.0;
    double alpha = 1.0;
    double cell_power_dbm = 43.0;
    double geometry_db = 5.0;
    double geometry_ref_distance_m = 1000.0;
    double noise_figure_db = 9.0;
    std::vector<PdpTap> pdp = pedestrian_a_profile();
    int sinusoids = 256;
};

ChannelParams resolve_channel(const LinkBudget& budget, int tx_antennas, int rx_antennas);

/// Sum-of-sinusoids oscillator bank backing one ChannelState. Immutable after
/// construction and shared between copies of the state.
struct FadingGenerator {
    int taps = 0;
    int rx = 0;
    int tx = 0;
    int sinusoids = 0;
    std::vector<double> amplitude;     ///< per coefficient
    std::vector<double> frequency_hz;  ///< per coefficient x sinusoid
    std::vector<double> phase;         ///< per coefficient x sinusoid
};

/// Per-oscillator phase advance over one step of `dt_s`.
struct FadingRotation {
    double dt_s = 0.0;
    std::vector<std::complex<double>> factor;
};

/// Instantaneous small-scale fading. Coefficient (tap, rx, tx) is stored at
/// index (tap * rx_count + rx) * tx_count + tx.
struct ChannelState {
    double time_s = 0.0;
    std::vector<std::complex<double>> tap_gains;
    std::vector<std::complex<double>> phasors;  ///< current oscillator phasors
    std::shared_ptr<const FadingGenerator> generator;
    std::shared_ptr<const FadingRotation> rotation;  ///< reused while the step size repeats

    [[nodiscard]] int taps() const { return generator ? generator->taps : 0; }
    [[nodiscard]] int rx() const { return generator ? generator->rx : 0; }
    [[nodiscard]] int tx() const { return generator ? generator->tx : 0; }
    [[nodiscard]] std::complex<double> gain(int tap, int r, int t) const
    {
        return tap_gains[static_cast<std::size_t>((tap * rx() + r) * tx() + t)];
    }
};

/// Draws a fading realization. Every coefficient is an independent Rayleigh
/// process with a Jakes Doppler spectrum and mean power equal to its tap weight.
ChannelState init_fading(const ChannelParams& params, Rng& rng);

/// Advances the fading processes by `dt_s`. Deterministic: the random content
/// is fixed by init_fading.
ChannelState step_fading(const ChannelState& state, double dt_s);

/// Large-scale gain -(128.1 + 37.6 log10(d / 1 km)) in dB.
double path_gain_db(double distance_m);

/// Sum over taps and receive antennas of |h|^2 for transmit antenna `tx`
/// (maximal-ratio combining gain of the flat-equivalent channel).
double combined_fading_power(const ChannelState& state, int tx = 0);

/// HS-PDSCH SINR for an aggregate linear channel gain g (path gain included).
double hs_sinr_db_for_gain(double p_hs_w, double g, const ChannelParams& params);

/// HS-PDSCH SINR of a single-transmit-antenna link, receive-combined.
double hs_sinr_db(double p_hs_w, const ChannelState& state, const ChannelParams& params);

enum class HarqOutcome { Ack, Nack };

/// Threshold decoder: ACK iff sinr_db >= beta(used_cqi) - margin_db.
HarqOutcome decode(double sinr_db, int used_cqi, const McsTable& table, double margin_db = 0.0);

}  // namespace hsdpa_ee

#endif
