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

#include "hsdpa_ee/link_channel.hpp"

#include "hsdpa_ee/power_model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace hsdpa_ee {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kThermalNoiseDbmPerHz = -174.0;

void sum_phasors(const FadingGenerator& gen, const std::vector<std::complex<double>>& phasors,
                 std::vector<std::complex<double>>& out)
{
    const auto coeffs = static_cast<std::size_t>(gen.taps * gen.rx * gen.tx);
    const auto n = static_cast<std::size_t>(gen.sinusoids);
    out.assign(coeffs, {});
    for (std::size_t c = 0; c < coeffs; ++c) {
        std::complex<double> acc = 0.0;
        const std::complex<double>* ph = &phasors[c * n];
        for (std::size_t k = 0; k < n; ++k)
            acc += ph[k];
        out[c] = gen.amplitude[c] * acc;
    }
}

}  // namespace

std::vector<PdpTap> pedestrian_a_profile()
{
    return {{0.0, 0.0}, {110e-9, -9.7}, {190e-9, -19.2}, {410e-9, -22.8}};
}

void ChannelParams::validate() const
{
    if (!(sf >= 1.0))
        throw std::invalid_argument("channel: spreading factor must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("channel: orthogonality factor must lie in [0, 1]");
    if (!(i_or_w >= 0.0) || !(i_oc_w >= 0.0))
        throw std::invalid_argument("channel: interference powers must be non-negative");
    if (!(n0_w_per_hz > 0.0) || !(bandwidth_hz > 0.0))
        throw std::invalid_argument("channel: noise density and bandwidth must be positive");
    if (!(speed_kmh >= 0.0) || !(carrier_hz > 0.0))
        throw std::invalid_argument("channel: speed must be >= 0 and carrier > 0");
    if (pdp.empty())
        throw std::invalid_argument("channel: power-delay profile is empty");
    for (const auto& tap : pdp)
        if (!std::isfinite(tap.power_db) || !(tap.delay_s >= 0.0))
            throw std::invalid_argument("channel: invalid power-delay profile tap");
    if (!(distance_m > 0.0))
        throw std::invalid_argument("channel: distance must be positive");
    if (tx_antennas < 1 || tx_antennas > 2 || rx_antennas < 1 || rx_antennas > 2)
        throw std::invalid_argument("channel: 1 or 2 antennas per side supported");
    if (sinusoids < 1)
        throw std::invalid_argument("channel: at least one sinusoid per coefficient");
}

double ChannelParams::doppler_hz() const
{
    return speed_kmh / 3.6 * carrier_hz / kSpeedOfLight;
}

double ChannelParams::interference_plus_noise_w() const
{
    return (1.0 - alpha) * i_or_w + i_oc_w + n0_w_per_hz * bandwidth_hz;
}

std::vector<double> ChannelParams::tap_weights() const
{
    std::vector<double> w;
    w.reserve(pdp.size());
    for (const auto& tap : pdp)
        w.push_back(db_to_linear(tap.power_db));
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w)
        x /= sum;
    return w;
}

ChannelParams resolve_channel(const LinkBudget& budget, int tx_antennas, int rx_antennas)
{
    if (!(budget.geometry_ref_distance_m > 0.0))
        throw std::invalid_argument("link budget: reference distance must be positive");
    ChannelParams p;
    p.sf = budget.sf;
    p.alpha = budget.alpha;
    p.bandwidth_hz = budget.bandwidth_hz;
    p.speed_kmh = budget.speed_kmh;
    p.carrier_hz = budget.carrier_hz;
    p.pdp = budget.pdp;
    p.distance_m = budget.distance_m;
    p.tx_antennas = tx_antennas;
    p.rx_antennas = rx_antennas;
    p.sinusoids = budget.sinusoids;
    p.n0_w_per_hz = dbm_to_watt(kThermalNoiseDbmPerHz + budget.noise_figure_db);

    const double cell_w = dbm_to_watt(budget.cell_power_dbm);
    p.i_or_w = cell_w * db_to_linear(path_gain_db(budget.distance_m));
    const double i_or_ref = cell_w * db_to_linear(path_gain_db(budget.geometry_ref_distance_m));
    const double noise_w = p.n0_w_per_hz * p.bandwidth_hz;
    p.i_oc_w = i_or_ref / db_to_linear(budget.geometry_db) - noise_w;
    if (p.i_oc_w < 0.0)
        throw std::invalid_argument("link budget: geometry exceeds the noise-limited value at the reference distance");
    p.validate();
    return p;
}

ChannelState init_fading(const ChannelParams& params, Rng& rng)
{
    params.validate();
    auto gen = std::make_shared<FadingGenerator>();
    gen->taps = static_cast<int>(params.pdp.size());
    gen->rx = params.rx_antennas;
    gen->tx = params.tx_antennas;
    gen->sinusoids = params.sinusoids;

    const auto weights = params.tap_weights();
    const double fd = params.doppler_hz();
    const int n = params.sinusoids;
    const auto coeffs = static_cast<std::size_t>(gen->taps * gen->rx * gen->tx);
    gen->amplitude.resize(coeffs);
    gen->frequency_hz.resize(coeffs * static_cast<std::size_t>(n));
    gen->phase.resize(coeffs * static_cast<std::size_t>(n));

    for (int tap = 0; tap < gen->taps; ++tap) {
        for (int r = 0; r < gen->rx; ++r) {
            for (int t = 0; t < gen->tx; ++t) {
                const auto c = static_cast<std::size_t>((tap * gen->rx + r) * gen->tx + t);
                gen->amplitude[c] = std::sqrt(weights[static_cast<std::size_t>(tap)] / n);
                for (int k = 0; k < n; ++k) {
                    // one jittered arrival angle per slice of (0, pi)
                    const double angle = std::numbers::pi * (k + uniform01(rng)) / n;
                    const auto idx = c * static_cast<std::size_t>(n) + static_cast<std::size_t>(k);
                    gen->frequency_hz[idx] = fd * std::cos(angle);
                    gen->phase[idx] = 2.0 * std::numbers::pi * uniform01(rng);
                }
            }
        }
    }

    ChannelState state;
    state.phasors.resize(gen->phase.size());
    for (std::size_t i = 0; i < gen->phase.size(); ++i)
        state.phasors[i] = std::polar(1.0, gen->phase[i]);
    state.generator = std::move(gen);
    sum_phasors(*state.generator, state.phasors, state.tap_gains);
    return state;
}

ChannelState step_fading(const ChannelState& state, double dt_s)
{
    if (!(dt_s > 0.0))
        throw std::invalid_argument("step_fading: time step must be positive");
    if (!state.generator)
        throw std::invalid_argument("step_fading: state has no fading generator");
    const FadingGenerator& gen = *state.generator;
    ChannelState next;
    next.generator = state.generator;
    next.time_s = state.time_s + dt_s;
    next.rotation = state.rotation;
    if (!next.rotation || next.rotation->dt_s != dt_s) {
        auto rot = std::make_shared<FadingRotation>();
        rot->dt_s = dt_s;
        rot->factor.resize(gen.frequency_hz.size());
        for (std::size_t i = 0; i < gen.frequency_hz.size(); ++i)
            rot->factor[i] = std::polar(1.0, 2.0 * std::numbers::pi * gen.frequency_hz[i] * dt_s);
        next.rotation = std::move(rot);
    }
    next.phasors.resize(state.phasors.size());
    const auto& f = next.rotation->factor;
    for (std::size_t i = 0; i < state.phasors.size(); ++i) {
        // phasor * factor
        const double a = state.phasors[i].real();
        const double b = state.phasors[i].imag();
        const double c = f[i].real();
        const double d = f[i].imag();
        next.phasors[i] = {a * c - b * d, a * d + b * c};
    }
    sum_phasors(gen, next.phasors, next.tap_gains);
    return next;
}

double path_gain_db(double distance_m)
{
    if (!(distance_m > 0.0))
        throw std::invalid_argument("path_gain_db: distance must be positive");
    return -(128.1 + 37.6 * std::log10(distance_m / 1000.0));
}

double combined_fading_power(const ChannelState& state, int tx)
{
    double sum = 0.0;
    for (int tap = 0; tap < state.taps(); ++tap)
        for (int r = 0; r < state.rx(); ++r)
            sum += std::norm(state.gain(tap, r, tx));
    return sum;
}

double hs_sinr_db_for_gain(double p_hs_w, double g, const ChannelParams& params)
{
    if (!(p_hs_w >= 0.0))
        throw std::invalid_argument("hs_sinr_db: HS-PDSCH power must be non-negative");
    return linear_to_db(params.sf * p_hs_w * g / params.interference_plus_noise_w());
}

double hs_sinr_db(double p_hs_w, const ChannelState& state, const ChannelParams& params)
{
    const double g = db_to_linear(path_gain_db(params.distance_m)) * combined_fading_power(state);
    return hs_sinr_db_for_gain(p_hs_w, g, params);
}

HarqOutcome decode(double sinr_db, int used_cqi, const McsTable& table, double margin_db)
{
    return sinr_db >= table.threshold_db(used_cqi) - margin_db ? HarqOutcome::Ack : HarqOutcome::Nack;
}

}  // namespace hsdpa_ee
