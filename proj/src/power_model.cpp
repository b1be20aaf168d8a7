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

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hsdpa_ee {

void PowerModelParams::validate() const
{
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("power model: eta must lie in (0, 1]");
    if (!(p_cir_w >= 0.0) || !(p_sta_w >= 0.0))
        throw std::invalid_argument("power model: circuit and static power must be non-negative");
    if (active_antennas != 1 && active_antennas != 2)
        throw std::invalid_argument("power model: active antenna count must be 1 or 2");
}

double dbm_to_watt(double p_dbm)
{
    return std::pow(10.0, (p_dbm - 30.0) / 10.0);
}

double watt_to_dbm(double p_w)
{
    return 10.0 * std::log10(p_w) + 30.0;
}

double db_to_linear(double x_db)
{
    return std::pow(10.0, x_db / 10.0);
}

double linear_to_db(double x)
{
    return 10.0 * std::log10(x);
}

double total_power(double p_tx_w, const PowerModelParams& params)
{
    if (!(p_tx_w >= 0.0))
        throw std::invalid_argument("total_power: transmit power must be non-negative");
    return p_tx_w / params.eta + params.idle_power_w();
}

double shannon_se(double p_tx_w, double n0_w_per_hz, double bandwidth_hz)
{
    const double noise = n0_w_per_hz * bandwidth_hz;
    if (!(n0_w_per_hz > 0.0) || !(bandwidth_hz > 0.0) || !(noise > 0.0))
        throw std::invalid_argument("shannon_se: noise density and bandwidth must be positive");
    if (!(p_tx_w >= 0.0))
        throw std::invalid_argument("shannon_se: transmit power must be non-negative");
    return std::log2(1.0 + p_tx_w / noise);
}

double shannon_ee(double p_tx_w, double n0_w_per_hz, double bandwidth_hz,
                  const PowerModelParams& params)
{
    const double se = shannon_se(p_tx_w, n0_w_per_hz, bandwidth_hz);
    const double consumed = total_power(p_tx_w, params);
    if (consumed == 0.0)
        return params.eta / (n0_w_per_hz * std::numbers::ln2);
    return bandwidth_hz * se / consumed;
}

double optimal_shannon_power(const PowerModelParams& params, double n0_w_per_hz,
                             double bandwidth_hz, double p_max_w, double tolerance_w)
{
    params.validate();
    if (!(p_max_w > 0.0))
        throw std::invalid_argument("optimal_shannon_power: p_max must be positive");
    if (!(tolerance_w > 0.0))
        throw std::invalid_argument("optimal_shannon_power: tolerance must be positive");

    auto ee = [&](double p) { return shannon_ee(p, n0_w_per_hz, bandwidth_hz, params); };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = p_max_w;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = ee(x1);
    double f2 = ee(x2);
    while (hi - lo > tolerance_w) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = ee(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = ee(x1);
        }
    }
    double best = 0.5 * (lo + hi);
    double best_ee = ee(best);
    // the bracket never contains the end points themselves
    for (double edge : {0.0, p_max_w}) {
        if (ee(edge) > best_ee) {
            best = edge;
            best_ee = ee(edge);
        }
    }
    return best;
}

}  // namespace hsdpa_ee
