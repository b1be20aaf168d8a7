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

#include "hsdpa_ee/power_model.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace hsdpa_ee;

namespace {

// Brute-force argmax of shannon_ee over an n-point uniform grid on [0, p_max].
double grid_argmax(const PowerModelParams& pm, double n0, double w, double p_max, int n)
{
    double best = 0.0;
    double best_ee = -1.0;
    for (int k = 0; k < n; ++k) {
        const double p = p_max * k / (n - 1);
        const double ee = shannon_ee(p, n0, w, pm);
        if (ee > best_ee) {
            best_ee = ee;
            best = p;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("dBm conversions")
{
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dbm_to_watt(0.0) == doctest::Approx(0.001).epsilon(1e-12));
    CHECK(dbm_to_watt(43.0) == doctest::Approx(19.9526).epsilon(1e-5));
    CHECK(watt_to_dbm(dbm_to_watt(37.25)) == doctest::Approx(37.25).epsilon(1e-12));
    CHECK(linear_to_db(db_to_linear(-3.0)) == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("total power")
{
    PowerModelParams pm;
    CHECK(total_power(0.0, pm) == doctest::Approx(12.0));
    CHECK(total_power(19.9526, pm) == doctest::Approx(64.507).epsilon(1e-5));
    pm.active_antennas = 2;
    CHECK(total_power(10.0, pm) == doctest::Approx(44.316).epsilon(1e-5));
    CHECK_THROWS_AS(total_power(-1.0, pm), std::invalid_argument);
}

TEST_CASE("power model validation")
{
    PowerModelParams pm;
    CHECK_NOTHROW(pm.validate());
    pm.eta = 0.0;
    CHECK_THROWS_AS(pm.validate(), std::invalid_argument);
    pm.eta = 1.0;
    CHECK_NOTHROW(pm.validate());
    pm.active_antennas = 3;
    CHECK_THROWS_AS(pm.validate(), std::invalid_argument);
    pm.active_antennas = 1;
    pm.p_sta_w = -0.1;
    CHECK_THROWS_AS(pm.validate(), std::invalid_argument);
}

TEST_CASE("shannon spectral efficiency")
{
    const double n0 = 2e-7;
    const double w = 5e6;
    CHECK(shannon_se(n0 * w, n0, w) == doctest::Approx(1.0));
    CHECK(shannon_se(0.0, n0, w) == 0.0);
    CHECK(shannon_se(3.0 * n0 * w, n0, w) == doctest::Approx(2.0));
    CHECK_THROWS_AS(shannon_se(1.0, 0.0, w), std::invalid_argument);
}

TEST_CASE("shannon energy efficiency")
{
    const PowerModelParams pm;
    const double w = 5e6;
    const double n0 = 1.0 / w;
    CHECK(shannon_ee(0.0, n0, w, pm) == 0.0);
    CHECK(shannon_ee(1.0, n0, w, pm) == doctest::Approx(5e6 / (1.0 / 0.38 + 12.0)));
    CHECK(shannon_ee(1.0, n0, w, pm) == doctest::Approx(341727.0).epsilon(1e-5));

    PowerModelParams bare;
    bare.p_cir_w = 0.0;
    bare.p_sta_w = 0.0;
    CHECK(shannon_ee(0.0, n0, w, bare) == doctest::Approx(0.38 / (n0 * std::log(2.0))));
}

TEST_CASE("golden-section optimum against a grid scan")
{
    const PowerModelParams pm;
    const double w = 5e6;
    const double p_max = dbm_to_watt(43.0);
    for (double noise_w : {1e-3, 1e-1, 1.0, 5.0}) {
        const double n0 = noise_w / w;
        const double grid = grid_argmax(pm, n0, w, p_max, 100000);
        const double golden = optimal_shannon_power(pm, n0, w, p_max);
        CHECK(golden > 0.0);
        CHECK(golden < p_max);
        CHECK(std::abs(golden - grid) <= 1e-3 * grid + p_max / 99999.0);
    }
}

TEST_CASE("optimum at the left edge without circuit power")
{
    PowerModelParams pm;
    pm.p_cir_w = 0.0;
    pm.p_sta_w = 0.0;
    const double w = 5e6;
    CHECK(optimal_shannon_power(pm, 1.0 / w, w, 20.0) == 0.0);
}

TEST_CASE("higher static power moves the optimum up")
{
    PowerModelParams pm;
    const double w = 5e6;
    const double n0 = 1.0 / w;
    const double p_max = dbm_to_watt(43.0);
    const double base = grid_argmax(pm, n0, w, p_max, 100000);
    pm.p_sta_w *= 2.0;
    const double doubled = grid_argmax(pm, n0, w, p_max, 100000);
    CHECK(doubled > base);
    CHECK(optimal_shannon_power(pm, n0, w, p_max) > base);
}

TEST_CASE("shannon EE is unimodal on a fine grid")
{
    const PowerModelParams pm;
    const double w = 5e6;
    const double n0 = 1.0 / w;
    const double p_max = dbm_to_watt(43.0);
    const int n = 100000;
    int direction_changes = 0;
    double prev = shannon_ee(0.0, n0, w, pm);
    int sign = 0;
    for (int k = 1; k < n; ++k) {
        const double cur = shannon_ee(p_max * k / (n - 1), n0, w, pm);
        const int s = cur > prev ? 1 : (cur < prev ? -1 : 0);
        if (s != 0 && sign != 0 && s != sign)
            ++direction_changes;
        if (s != 0)
            sign = s;
        prev = cur;
    }
    CHECK(direction_changes == 1);
}
