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

#include "hsdpa_ee/mcs_table.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hsdpa_ee {

namespace {

constexpr std::string_view kHeader = "cqi,sinr_db,tbs_bits,mod_order,codes";

// Checks the ordering invariants of `next` against its predecessor.
void check_successor(const McsEntry* prev, const McsEntry& next, int line)
{
    if (!std::isfinite(next.sinr_threshold_db))
        throw TableError(line, "SINR threshold must be finite");
    if (next.tbs_bits <= 0)
        throw TableError(line, "transport block size must be positive");
    if (prev == nullptr) {
        if (next.cqi != 1)
            throw TableError(line, "CQI indices must start at 1, found " + std::to_string(next.cqi));
        return;
    }
    if (next.cqi == prev->cqi)
        throw TableError(line, "duplicate CQI index " + std::to_string(next.cqi));
    if (next.cqi != prev->cqi + 1)
        throw TableError(line, "CQI index gap: expected " + std::to_string(prev->cqi + 1) +
                                   ", found " + std::to_string(next.cqi));
    if (!(next.sinr_threshold_db > prev->sinr_threshold_db))
        throw TableError(line, "SINR thresholds must be strictly increasing (CQI " +
                                   std::to_string(next.cqi) + ")");
    if (next.tbs_bits < prev->tbs_bits)
        throw TableError(line, "transport block sizes must be non-decreasing (CQI " +
                                   std::to_string(next.cqi) + ")");
}

}  // namespace

TableError::TableError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line)
{
}

McsTable::McsTable(std::vector<McsEntry> entries, double ber_target)
    : entries_(std::move(entries)),
      ber_target_(ber_target)
{
    if (entries_.empty())
        throw TableError(0, "MCS table is empty");
    if (!(ber_target_ > 0.0 && ber_target_ < 1.0))
        throw TableError(0, "BER target must lie in (0, 1)");
    const McsEntry* prev = nullptr;
    for (const auto& e : entries_) {
        check_successor(prev, e, 0);
        prev = &e;
    }
}

const McsEntry& McsTable::at(int cqi) const
{
    if (!valid_cqi(cqi))
        throw std::out_of_range("invalid CQI index " + std::to_string(cqi));
    return entries_[static_cast<std::size_t>(cqi - 1)];
}

McsTable load_table(std::string_view csv, double ber_target)
{
    std::vector<McsEntry> entries;
    bool seen_header = false;
    int line_no = 0;
    for (std::string_view line : detail::split_lines(csv)) {
        ++line_no;
        const std::string_view text = detail::trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        if (!seen_header) {
            std::string compact;
            for (char c : text)
                if (c != ' ' && c != '\t')
                    compact.push_back(c);
            if (compact != kHeader)
                throw TableError(line_no, "expected header '" + std::string(kHeader) + "'");
            seen_header = true;
            continue;
        }
        const auto fields = detail::split(text, ',');
        if (fields.size() != 5)
            throw TableError(line_no, "expected 5 fields, found " + std::to_string(fields.size()));
        McsEntry e;
        const bool ok = detail::parse_int(fields[0], e.cqi) &&
                        detail::parse_double(fields[1], e.sinr_threshold_db) &&
                        detail::parse_int(fields[2], e.tbs_bits) &&
                        detail::parse_int(fields[3], e.modulation_order) &&
                        detail::parse_int(fields[4], e.num_codes);
        if (!ok)
            throw TableError(line_no, "malformed row '" + std::string(text) + "'");
        check_successor(entries.empty() ? nullptr : &entries.back(), e, line_no);
        entries.push_back(e);
    }
    if (!seen_header)
        throw TableError(0, "missing header line");
    if (entries.empty())
        throw TableError(0, "table has no rows");
    return McsTable(std::move(entries), ber_target);
}

McsTable load_table_file(const std::filesystem::path& path, double ber_target)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open MCS table '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_table(buf.str(), ber_target);
}

McsTable default_table(double step_db, int entries)
{
    if (!(step_db > 0.0) || !std::isfinite(step_db))
        throw std::invalid_argument("default_table: threshold step must be positive");
    if (entries < 2)
        throw std::invalid_argument("default_table: at least 2 entries required");

    constexpr double first_threshold_db = -4.5;
    constexpr double tbs_first = 137.0;
    constexpr double tbs_last = 25558.0;
    const double ratio = std::pow(tbs_last / tbs_first, 1.0 / (entries - 1));

    std::vector<McsEntry> rows;
    rows.reserve(static_cast<std::size_t>(entries));
    for (int k = 1; k <= entries; ++k) {
        McsEntry e;
        e.cqi = k;
        e.sinr_threshold_db = first_threshold_db + (k - 1) * step_db;
        e.tbs_bits = static_cast<int>(std::lround(tbs_first * std::pow(ratio, k - 1)));
        e.modulation_order = (2 * k <= entries) ? 2 : 4;
        // 480 channel symbols per SF16 code and TTI, rate ~0.8
        const double per_code = 480.0 * e.modulation_order * 0.8;
        e.num_codes = std::clamp(static_cast<int>(std::ceil(e.tbs_bits / per_code)), 1, 15);
        rows.push_back(e);
    }
    return McsTable(std::move(rows));
}

std::string table_to_csv(const McsTable& table, std::string_view comment)
{
    std::string out;
    for (std::string_view line : detail::split_lines(comment)) {
        out += "# ";
        out += line;
        out += '\n';
    }
    out += kHeader;
    out += '\n';
    for (const auto& e : table.entries()) {
        out += std::to_string(e.cqi);
        out += ',';
        out += detail::format_double(e.sinr_threshold_db);
        out += ',';
        out += std::to_string(e.tbs_bits);
        out += ',';
        out += std::to_string(e.modulation_order);
        out += ',';
        out += std::to_string(e.num_codes);
        out += '\n';
    }
    return out;
}

int cqi_from_sinr(double sinr_db, const McsTable& table)
{
    if (std::isnan(sinr_db))
        return 0;
    const auto rows = table.entries();
    const auto it = std::upper_bound(rows.begin(), rows.end(), sinr_db,
                                     [](double v, const McsEntry& e) { return v < e.sinr_threshold_db; });
    return static_cast<int>(it - rows.begin());
}

double threshold_delta(int i, int j, const McsTable& table)
{
    return table.threshold_db(j) - table.threshold_db(i);
}

}  // namespace hsdpa_ee
