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

#ifndef HSDPA_EE_POWER_MODEL_HPP
#define HSDPA_EE_POWER_MODEL_HPP

namespace hsdpa_ee {

/// Node-B power consumption model.
///
/// Total consumed power is split into the power-amplifier conversion term
/// (transmit power divided by the conversion efficiency), a dynamic circuit
/// term proportional to the number of active transmit chains, and a static
/// term that does not depend on either.
struct PowerModelParams {
    double eta = 0.38;        ///< power-conversion efficiency, (0, 1]
    double p_cir_w = 6.0;     ///< circuit power per active transmit antenna [W]
    double p_sta_w = 6.0;     ///< static power [W]
    int active_antennas = 1;  ///< 1 (SISO/SIMO) or 2 (D-TxAA)

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;

    /// Power drawn with the transmitter silent: m_a * p_cir + p_sta.
    [[nodiscard]] double idle_power_w() const { return active_antennas * p_cir_w + p_sta_w; }
};

double dbm_to_watt(double p_dbm);
double watt_to_dbm(double p_w);
double db_to_linear(double x_db);
double linear_to_db(double x);

/// Total Node-B consumption for transmit power `p_tx_w` [W].
double total_power(double p_tx_w, const PowerModelParams& params);

/// AWGN Shannon spectral efficiency log2(1 + P / (N0 W)) [bit/s/Hz].
double shannon_se(double p_tx_w, double n0_w_per_hz, double bandwidth_hz);

/// Shannon energy efficiency W * SE / P_total [bit/J].
///
/// With no circuit or static power the ratio is 0/0 at zero transmit power;
/// the limit eta / (N0 ln 2) is returned in that case.
double shannon_ee(double p_tx_w, double n0_w_per_hz, double bandwidth_hz,
                  const PowerModelParams& params);

/// Transmit power in [0, p_max_w] maximizing shannon_ee, located by
/// golden-section search (the curve is quasiconcave in P).
double optimal_shannon_power(const PowerModelParams& params, double n0_w_per_hz,
                             double bandwidth_hz, double p_max_w, double tolerance_w = 1e-6);

}  // namespace hsdpa_ee

#endif
