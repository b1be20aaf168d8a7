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

#ifndef HSDPA_EE_MCS_TABLE_HPP
#define HSDPA_EE_MCS_TABLE_HPP

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hsdpa_ee {

/// One CQI row: the HS-PDSCH SINR threshold at which the row's MCS meets the
/// BER target, and the transport block it carries per TTI.
struct McsEntry {
    int cqi = 0;
    double sinr_threshold_db = 0.0;
    int tbs_bits = 0;
    int modulation_order = 2;  // informational
    int num_codes = 1;         // informational
};

/// Raised by the table loader; `line()` is the 1-based line of the source
/// text that caused the failure (0 when the problem is not tied to a line).
class TableError : public std::runtime_error {
public:
    TableError(int line, const std::string& what);
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

/// Immutable CQI -> (threshold, TBS) mapping.
///
/// CQI indices are consecutive from 1, thresholds strictly increase and TBS
/// never decreases with the index. CQI 0 is reserved for "out of range".
class McsTable {
public:
    McsTable(std::vector<McsEntry> entries, double ber_target = 0.1);

    [[nodiscard]] int size() const { return static_cast<int>(entries_.size()); }
    [[nodiscard]] int max_cqi() const { return size(); }
    [[nodiscard]] double ber_target() const { return ber_target_; }
    [[nodiscard]] std::span<const McsEntry> entries() const { return entries_; }
    [[nodiscard]] bool valid_cqi(int cqi) const { return cqi >= 1 && cqi <= size(); }

    /// Throws std::out_of_range for an index outside [1, max_cqi()].
    [[nodiscard]] const McsEntry& at(int cqi) const;
    [[nodiscard]] double threshold_db(int cqi) const { return at(cqi).sinr_threshold_db; }
    [[nodiscard]] int tbs_bits(int cqi) const { return at(cqi).tbs_bits; }

private:
    std::vector<McsEntry> entries_;
    double ber_target_;
};

/// Parses the `cqi,sinr_db,tbs_bits,mod_order,codes` CSV dialect. Blank lines
/// and lines starting with '#' are ignored.
McsTable load_table(std::string_view csv, double ber_target = 0.1);
McsTable load_table_file(const std::filesystem::path& path, double ber_target = 0.1);

/// Synthetic default table: thresholds from -4.5 dB in steps of `step_db`,
/// TBS growing geometrically from 137 to 25558 bits.
McsTable default_table(double step_db = 1.0, int entries = 30);

/// CSV text for a table, including a leading comment block.
std::string table_to_csv(const McsTable& table, std::string_view comment = {});

/// Largest CQI whose threshold does not exceed `sinr_db`, or 0 when the SINR
/// is below every threshold.
int cqi_from_sinr(double sinr_db, const McsTable& table);

/// beta_j - beta_i in dB.
double threshold_delta(int i, int j, const McsTable& table);

}  // namespace hsdpa_ee

#endif
