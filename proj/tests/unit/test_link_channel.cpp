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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace hsdpa_ee;

namespace {

ChannelParams flat_params(double speed_kmh)
{
    ChannelParams p;
    p.speed_kmh = speed_kmh;
    p.pdp = {{0.0, 0.0}};
    return p;
}

}  // namespace

TEST_CASE("path gain")
{
    CHECK(path_gain_db(1000.0) == doctest::Approx(-128.1));
    CHECK(path_gain_db(100.0) == doctest::Approx(-90.5));
    double prev = path_gain_db(10.0);
    for (double d = 20.0; d <= 5000.0; d += 10.0) {
        CHECK(path_gain_db(d) < prev);
        prev = path_gain_db(d);
    }
    CHECK_THROWS_AS(path_gain_db(0.0), std::invalid_argument);
}

TEST_CASE("HS-PDSCH SINR hand values")
{
    ChannelParams p;
    p.sf = 16.0;
    p.alpha = 1.0;
    p.i_oc_w = 0.0;
    p.bandwidth_hz = 5e6;
    p.n0_w_per_hz = 1.0 / p.bandwidth_hz;
    CHECK(hs_sinr_db_for_gain(1.0, 1.0, p) == doctest::Approx(10.0 * std::log10(16.0)));
    CHECK(hs_sinr_db_for_gain(2.0, 1.0, p) - hs_sinr_db_for_gain(1.0, 1.0, p) ==
          doctest::Approx(3.0103).epsilon(1e-5));

    p.alpha = 0.0;
    p.i_or_w = 1e6;
    CHECK(hs_sinr_db_for_gain(1.0, 0.5, p) == doctest::Approx(10.0 * std::log10(16.0 * 0.5 / 1e6)).epsilon(1e-5));
}

TEST_CASE("SINR difference equals power difference on a frozen channel")
{
    ChannelParams p = resolve_channel(LinkBudget{}, 1, 2);
    Rng rng(11);
    ChannelState s = init_fading(p, rng);
    for (int k = 0; k < 1000; ++k) {
        s = step_fading(s, 0.002);
        const double p1 = dbm_to_watt(10.0 + 33.0 * uniform01(rng));
        const double p2 = dbm_to_watt(10.0 + 33.0 * uniform01(rng));
        const double lhs = hs_sinr_db(p1, s, p) - hs_sinr_db(p2, s, p);
        const double rhs = watt_to_dbm(p1) - watt_to_dbm(p2);
        CHECK(std::abs(lhs - rhs) <= 1e-9);
    }
}

TEST_CASE("zero speed freezes the channel")
{
    const ChannelParams p = resolve_channel(LinkBudget{.speed_kmh = 0.0}, 1, 2);
    Rng rng(3);
    const ChannelState s0 = init_fading(p, rng);
    const ChannelState s1 = step_fading(step_fading(s0, 0.002), 0.5);
    CHECK(s1.time_s == doctest::Approx(0.502));
    for (std::size_t i = 0; i < s0.tap_gains.size(); ++i)
        CHECK(std::abs(s1.tap_gains[i] - s0.tap_gains[i]) < 1e-12);
}

TEST_CASE("fading is deterministic for a seed")
{
    const ChannelParams p = resolve_channel(LinkBudget{}, 2, 2);
    Rng a(99);
    Rng b(99);
    ChannelState sa = init_fading(p, a);
    ChannelState sb = init_fading(p, b);
    for (int k = 0; k < 50; ++k) {
        sa = step_fading(sa, 0.002);
        sb = step_fading(sb, 0.002);
    }
    CHECK(sa.tap_gains == sb.tap_gains);
}

TEST_CASE("long-run tap powers follow the delay profile")
{
    ChannelParams p;
    p.speed_kmh = 120.0;
    const auto weights = p.tap_weights();
    std::vector<double> acc(weights.size(), 0.0);
    const int realizations = 100;
    const int steps = 10000;
    for (int r = 0; r < realizations; ++r) {
        Rng rng(1000 + r);
        ChannelState s = init_fading(p, rng);
        for (int k = 0; k < steps; ++k) {
            s = step_fading(s, 0.002);
            for (int tap = 0; tap < s.taps(); ++tap)
                acc[static_cast<std::size_t>(tap)] += std::norm(s.gain(tap, 0, 0));
        }
    }
    for (std::size_t tap = 0; tap < weights.size(); ++tap) {
        const double mean = acc[tap] / (realizations * steps);
        CHECK(mean == doctest::Approx(weights[tap]).epsilon(0.02));
    }
}

TEST_CASE("tap envelope is Rayleigh distributed")
{
    // Samples 50 ms apart at 120 km/h are effectively independent, which the
    // Kolmogorov-Smirnov critical value assumes.
    const ChannelParams p = flat_params(120.0);
    std::vector<double> env;
    env.reserve(1000000);
    for (int r = 0; r < 10000; ++r) {
        Rng rng(50000 + r);
        ChannelState s = init_fading(p, rng);
        for (int k = 0; k < 100; ++k) {
            s = step_fading(s, 0.05);
            env.push_back(std::abs(s.gain(0, 0, 0)));
        }
    }
    std::sort(env.begin(), env.end());
    const double n = static_cast<double>(env.size());
    double d = 0.0;
    for (std::size_t i = 0; i < env.size(); ++i) {
        const double cdf = 1.0 - std::exp(-env[i] * env[i]);
        d = std::max({d, (i + 1) / n - cdf, cdf - i / n});
    }
    CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("autocorrelation follows the Bessel function")
{
    const ChannelParams p = flat_params(30.0);
    const double fd = p.doppler_hz();
    for (double lag : {0.002, 0.006}) {
        std::complex<double> acc = 0.0;
        double power = 0.0;
        for (int r = 0; r < 4000; ++r) {
            Rng rng(r);
            const ChannelState s0 = init_fading(p, rng);
            const ChannelState s1 = step_fading(s0, lag);
            acc += s0.gain(0, 0, 0) * std::conj(s1.gain(0, 0, 0));
            power += std::norm(s0.gain(0, 0, 0));
        }
        const double expected = std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * fd * lag);
        CHECK(std::real(acc) / power == doctest::Approx(expected).epsilon(0.05).scale(1.0));
    }
}

TEST_CASE("receive combining sums antenna powers")
{
    const ChannelParams p = resolve_channel(LinkBudget{}, 1, 2);
    Rng rng(5);
    const ChannelState s = init_fading(p, rng);
    double manual = 0.0;
    for (int tap = 0; tap < s.taps(); ++tap)
        manual += std::norm(s.gain(tap, 0, 0)) + std::norm(s.gain(tap, 1, 0));
    CHECK(combined_fading_power(s) == doctest::Approx(manual));
}

TEST_CASE("link budget geometry")
{
    LinkBudget b;
    b.distance_m = b.geometry_ref_distance_m;
    const ChannelParams p = resolve_channel(b, 1, 1);
    const double geometry = p.i_or_w / (p.i_oc_w + p.n0_w_per_hz * p.bandwidth_hz);
    CHECK(linear_to_db(geometry) == doctest::Approx(b.geometry_db));

    b.distance_m = 300.0;
    const ChannelParams near = resolve_channel(b, 1, 1);
    CHECK(near.i_or_w > p.i_or_w);
    CHECK(near.i_oc_w == doctest::Approx(p.i_oc_w));
}

TEST_CASE("channel validation")
{
    ChannelParams p;
    CHECK_NOTHROW(p.validate());
    p.alpha = 1.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.alpha = 0.5;
    p.sf = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.sf = 16.0;
    p.pdp.clear();
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("threshold decoder")
{
    const McsTable t = default_table();
    CHECK(decode(t.threshold_db(12) + 10.0, 12, t) == HarqOutcome::Ack);
    CHECK(decode(t.threshold_db(12) - 10.0, 12, t) == HarqOutcome::Nack);
    CHECK(decode(t.threshold_db(12), 12, t) == HarqOutcome::Ack);
    CHECK(decode(t.threshold_db(12) - 0.5, 12, t, 1.0) == HarqOutcome::Ack);
}
