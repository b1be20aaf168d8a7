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

#include "hsdpa_ee/sim_engine.hpp"

#include "hsdpa_ee/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace hsdpa_ee {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

const McsTable& shared_default_table()
{
    static const McsTable table = default_table();
    return table;
}

// What the user measured in one TTI, delivered to the Node B later.
struct Report {
    double reference_power_dbm = 0.0;
    int cqi = 0;
    MimoFeedback mimo;
    std::optional<HarqReport> harq;
    std::optional<HarqReport> harq2;
    // Transport blocks behind the HARQ reports: MCS and attempts so far.
    int block_mcs = 0;
    int block_attempts = 0;
    double block_sinr = 0.0;
    int block_mcs2 = 0;
    int block_attempts2 = 0;
    double block_sinr2 = 0.0;
};

struct NackCounter {
    int first = 0;
    int first_nacks = 0;
    int all = 0;
    int all_nacks = 0;

    void add(const TtiRecord& r)
    {
        auto count = [&](TtiOutcome o, bool retx) {
            if (o == TtiOutcome::Idle)
                return;
            const bool nack = o == TtiOutcome::Nack;
            ++all;
            all_nacks += nack ? 1 : 0;
            if (!retx) {
                ++first;
                first_nacks += nack ? 1 : 0;
            }
        };
        count(r.outcome, r.retransmission);
        count(r.outcome2, false);
    }

    void finish(RunMetrics& m) const
    {
        m.nack_rate = first > 0 ? static_cast<double>(first_nacks) / first : 0.0;
        m.nack_rate_all = all > 0 ? static_cast<double>(all_nacks) / all : 0.0;
    }
};

struct PendingBlock {
    int mcs = 0;
    int attempts = 0;
    double combined_sinr = 0.0;  // linear, summed over earlier attempts
};

// Per-stream AMC without the theta_min floor, as a conventional scheduler does.
int baseline_cqi(int cqi, const Report& r, double power_dbm, double delta_db, const McsTable& table)
{
    return amc_cqi(cqi, r.reference_power_dbm, power_dbm, delta_db, table);
}

}  // namespace

std::string_view to_string(AntennaMode mode)
{
    switch (mode) {
    case AntennaMode::Siso: return "siso";
    case AntennaMode::Simo: return "simo";
    case AntennaMode::Mimo: return "mimo";
    }
    return "?";
}

std::string_view to_string(Strategy strategy)
{
    switch (strategy) {
    case Strategy::FixedBaseline: return "fixed_baseline";
    case Strategy::PerTtiOptimal: return "per_tti_optimal";
    case Strategy::SemiStatic: return "semi_static";
    }
    return "?";
}

std::string_view to_string(SweepVariable variable)
{
    switch (variable) {
    case SweepVariable::Speed: return "speed";
    case SweepVariable::Distance: return "distance";
    case SweepVariable::ThetaMin: return "theta_min";
    case SweepVariable::FixedPower: return "fixed_power";
    case SweepVariable::AntennaMode: return "antenna_mode";
    }
    return "?";
}

AntennaMode parse_antenna_mode(std::string_view name)
{
    const auto s = lower(name);
    if (s == "siso")
        return AntennaMode::Siso;
    if (s == "simo")
        return AntennaMode::Simo;
    if (s == "mimo")
        return AntennaMode::Mimo;
    throw std::invalid_argument("unknown antenna mode '" + std::string(name) + "'");
}

Strategy parse_strategy(std::string_view name)
{
    const auto s = lower(name);
    if (s == "fixed_baseline" || s == "baseline")
        return Strategy::FixedBaseline;
    if (s == "per_tti_optimal" || s == "per_tti")
        return Strategy::PerTtiOptimal;
    if (s == "semi_static")
        return Strategy::SemiStatic;
    throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

SweepVariable parse_sweep_variable(std::string_view name)
{
    const auto s = lower(name);
    if (s == "speed")
        return SweepVariable::Speed;
    if (s == "distance")
        return SweepVariable::Distance;
    if (s == "theta_min")
        return SweepVariable::ThetaMin;
    if (s == "fixed_power")
        return SweepVariable::FixedPower;
    if (s == "antenna_mode")
        return SweepVariable::AntennaMode;
    throw std::invalid_argument("unknown sweep variable '" + std::string(name) + "'");
}

const McsTable& ScenarioConfig::mcs_table() const
{
    return table ? *table : shared_default_table();
}

PowerModelParams ScenarioConfig::effective_power_model() const
{
    PowerModelParams pm = power_model;
    pm.active_antennas = antenna_mode == AntennaMode::Mimo ? 2 : 1;
    return pm;
}

ChannelParams ScenarioConfig::channel() const
{
    switch (antenna_mode) {
    case AntennaMode::Siso: return resolve_channel(link, 1, 1);
    case AntennaMode::Simo: return resolve_channel(link, 1, 2);
    case AntennaMode::Mimo: return resolve_channel(link, 2, 2);
    }
    throw std::invalid_argument("scenario: invalid antenna mode");
}

void ScenarioConfig::validate() const
{
    if (duration_ttis <= 0)
        throw std::invalid_argument("scenario: duration must be at least one TTI");
    if (feedback_delay_ttis < 1)
        throw std::invalid_argument("scenario: feedback delay must be at least one TTI");
    if (!std::isfinite(baseline_power_dbm))
        throw std::invalid_argument("scenario: baseline power must be finite");
    if (baseline_power_dbm > controller.p_max_dbm)
        throw std::invalid_argument("scenario: baseline power exceeds p_max");
    if (max_retransmissions < 0)
        throw std::invalid_argument("scenario: max retransmissions must be non-negative");
    if (!std::isfinite(decode_margin_db))
        throw std::invalid_argument("scenario: decode margin must be finite");
    if (!(dual.pair_tolerance_db >= 0.0) || !(dual.power_factor > 0.0))
        throw std::invalid_argument("scenario: invalid dual-stream options");
    controller.validate();
    effective_power_model().validate();
    if (controller.theta_min > mcs_table().max_cqi())
        throw std::invalid_argument("scenario: theta_min exceeds the MCS table");
    (void)channel();
}

RunMetrics summarize(const std::vector<TtiRecord>& trace, double tti_ms)
{
    RunMetrics m;
    NackCounter nacks;
    double power_sum = 0.0;
    for (const auto& r : trace) {
        m.total_bits += r.delivered_bits;
        m.total_energy_j += r.energy_j;
        power_sum += r.p_tx_dbm;
        m.reconfig_count += r.reconfigured ? 1 : 0;
        nacks.add(r);
    }
    if (m.total_energy_j > 0.0)
        m.avg_ee_bits_per_joule = m.total_bits / m.total_energy_j;
    if (!trace.empty()) {
        m.throughput_bps = m.total_bits / (static_cast<double>(trace.size()) * tti_ms * 1e-3);
        m.mean_power_dbm = power_sum / static_cast<double>(trace.size());
    }
    nacks.finish(m);
    return m;
}

RunResult run(const ScenarioConfig& scenario, bool keep_trace)
{
    scenario.validate();
    const McsTable& table = scenario.mcs_table();
    const PowerModelParams pm = scenario.effective_power_model();
    const ChannelParams params = scenario.channel();
    const ControllerConfig& cfg = scenario.controller;
    const bool mimo = scenario.antenna_mode == AntennaMode::Mimo;
    const double tti_s = cfg.tti_ms * 1e-3;
    const auto book = pci_codebook();
    const double path_gain = db_to_linear(path_gain_db(params.distance_m));
    const TriggerPolicy policy =
        scenario.strategy == Strategy::PerTtiOptimal ? TriggerPolicy::EveryTti : TriggerPolicy::DualTrigger;

    Rng rng(scenario.seed);
    ChannelState channel = init_fading(params, rng);
    ControllerState state = initial_state(scenario.baseline_power_dbm, cfg);

    const auto delay = static_cast<std::size_t>(scenario.feedback_delay_ttis);
    std::vector<Report> pipeline(delay);
    std::vector<bool> pipeline_full(delay, false);

    RunResult result;
    if (keep_trace)
        result.trace.reserve(static_cast<std::size_t>(scenario.duration_ttis));
    std::vector<TtiRecord> scratch;
    std::vector<TtiRecord>& trace = keep_trace ? result.trace : scratch;

    std::deque<PendingBlock> retx;

    NackCounter nacks;
    double power_sum = 0.0;

    for (int m = 0; m < scenario.duration_ttis; ++m) {
        if (m > 0)
            channel = step_fading(channel, tti_s);

        const std::size_t slot = static_cast<std::size_t>(m) % delay;
        std::optional<Report> fb;
        if (pipeline_full[slot])
            fb = pipeline[slot];
        if (fb) {
            const int limit = 1 + scenario.max_retransmissions;
            if (fb->harq && fb->harq->outcome == HarqOutcome::Nack && fb->block_attempts < limit)
                retx.push_back({fb->block_mcs, fb->block_attempts, fb->block_sinr});
            if (fb->harq2 && fb->harq2->outcome == HarqOutcome::Nack && fb->block_attempts2 < limit)
                retx.push_back({fb->block_mcs2, fb->block_attempts2, fb->block_sinr2});
        }

        // Node B decision.
        bool reconfigured = false;
        int mcs = 0;
        int mcs2 = 0;
        if (scenario.strategy == Strategy::FixedBaseline) {
            std::optional<HarqReport> merged = fb ? fb->harq : std::nullopt;
            if (merged && fb->harq2)
                merged->delivered_bits += fb->harq2->delivered_bits;
            state = detail::begin_tti(state, merged, cfg);
            if (fb && fb->harq2 && fb->harq2->first_attempt)
                state = update_offset(state, fb->harq2->outcome, cfg);
            state.p_current_dbm = scenario.baseline_power_dbm;
            if (fb) {
                if (!mimo) {
                    mcs = baseline_cqi(fb->cqi, *fb, state.p_current_dbm, state.delta_db, table);
                } else {
                    mcs = baseline_cqi(fb->mimo.cqi_primary, *fb, state.p_current_dbm, state.delta_db, table);
                    if (fb->mimo.mode == StreamMode::Dual)
                        mcs2 = baseline_cqi(fb->mimo.cqi_secondary, *fb, state.p_current_dbm, state.delta_db, table);
                }
            }
        } else {
            TtiStep step;
            if (!mimo) {
                SisoFeedback sf;
                if (fb) {
                    sf.cqi = fb->cqi;
                    sf.reference_power_dbm = fb->reference_power_dbm;
                    sf.harq = fb->harq;
                }
                step = on_tti(state, sf, table, cfg, pm, policy);
            } else {
                MimoReport mr;
                if (fb) {
                    mr.feedback = fb->mimo;
                    mr.reference_power_dbm = fb->reference_power_dbm;
                    mr.harq = fb->harq;
                    mr.harq2 = fb->harq2;
                }
                step = on_tti_mimo(state, mr, table, cfg, pm, policy, scenario.dual);
            }
            state = step.state;
            reconfigured = step.decision.action == Action::Reconfigure;
            mcs = step.decision.new_mcs;
            mcs2 = step.decision.new_mcs2;
        }
        if (mcs == 0 && mcs2 > 0)
            std::swap(mcs, mcs2);

        // Pending retransmissions take the primary stream at their original MCS.
        int attempts = 1;
        double earlier_sinr = 0.0;
        bool retransmission = false;
        if (mcs > 0 && !retx.empty()) {
            mcs = retx.front().mcs;
            attempts = retx.front().attempts + 1;
            earlier_sinr = retx.front().combined_sinr;
            retx.pop_front();
            retransmission = true;
        }

        const double p_dbm = state.p_current_dbm;
        const double p_w = dbm_to_watt(p_dbm);

        // Transmission over the current channel.
        TtiRecord rec;
        rec.tti = m;
        rec.p_tx_dbm = p_dbm;
        rec.mcs = mcs;
        rec.mcs2 = mcs2;
        rec.reconfigured = reconfigured;
        rec.retransmission = retransmission;
        rec.energy_j = tti_s * total_power(p_w, pm);

        std::optional<std::vector<Eigen::Matrix2cd>> taps;
        if (mimo)
            taps = channel_matrices(channel);

        double sinr1 = 0.0;
        double sinr2 = 0.0;
        if (!mimo) {
            sinr1 = hs_sinr_db_for_gain(p_w, path_gain * combined_fading_power(channel), params);
        } else {
            const auto& w = book[static_cast<std::size_t>(fb ? fb->mimo.pci : 0)];
            if (mcs2 > 0)
                std::tie(sinr1, sinr2) = per_stream_sinr(*taps, w, 0.5 * p_w, params);
            else
                sinr1 = single_stream_sinr_db(*taps, w, p_w, params);
        }
        rec.sinr_db = sinr1;

        std::optional<HarqReport> harq;
        std::optional<HarqReport> harq2;
        // Soft combining: a re-attempt is decoded on the SINR summed over attempts.
        const double combined1 = (scenario.soft_combining ? earlier_sinr : 0.0) + db_to_linear(sinr1);
        if (mcs > 0) {
            const HarqOutcome o = decode(linear_to_db(combined1), mcs, table, scenario.decode_margin_db);
            rec.outcome = o == HarqOutcome::Ack ? TtiOutcome::Ack : TtiOutcome::Nack;
            const double bits = o == HarqOutcome::Ack ? table.tbs_bits(mcs) : 0.0;
            rec.delivered_bits += bits;
            harq = HarqReport{o, bits, rec.energy_j, attempts == 1};
        }
        if (mcs2 > 0) {
            const HarqOutcome o = decode(sinr2, mcs2, table, scenario.decode_margin_db);
            rec.outcome2 = o == HarqOutcome::Ack ? TtiOutcome::Ack : TtiOutcome::Nack;
            const double bits = o == HarqOutcome::Ack ? table.tbs_bits(mcs2) : 0.0;
            rec.delivered_bits += bits;
            harq2 = HarqReport{o, bits, 0.0, true};
        }
        rec.delta_db = state.delta_db;

        // User-side measurement at the current power, delivered `delay` TTIs later.
        Report report;
        report.reference_power_dbm = p_dbm;
        report.harq = harq;
        report.harq2 = harq2;
        report.block_mcs = mcs;
        report.block_attempts = attempts;
        report.block_sinr = combined1;
        report.block_mcs2 = mcs2;
        report.block_attempts2 = 1;
        report.block_sinr2 = db_to_linear(sinr2);
        if (!mimo) {
            report.cqi = cqi_from_sinr(sinr1, table);
        } else {
            report.mimo = select_mode_and_feedback(*taps, table, p_w, params);
        }
        pipeline[slot] = report;
        pipeline_full[slot] = true;

        nacks.add(rec);
        result.metrics.total_bits += rec.delivered_bits;
        result.metrics.total_energy_j += rec.energy_j;
        result.metrics.reconfig_count += reconfigured ? 1 : 0;
        power_sum += p_dbm;
        if (keep_trace)
            trace.push_back(rec);
    }

    auto& mt = result.metrics;
    mt.avg_ee_bits_per_joule = mt.total_energy_j > 0.0 ? mt.total_bits / mt.total_energy_j : 0.0;
    mt.throughput_bps = mt.total_bits / (scenario.duration_ttis * tti_s);
    mt.mean_power_dbm = power_sum / scenario.duration_ttis;
    nacks.finish(mt);
    return result;
}

void apply_sweep_value(ScenarioConfig& scenario, SweepVariable variable, double value)
{
    switch (variable) {
    case SweepVariable::Speed:
        scenario.link.speed_kmh = value;
        return;
    case SweepVariable::Distance:
        scenario.link.distance_m = value;
        return;
    case SweepVariable::ThetaMin:
        if (value != std::floor(value))
            throw std::invalid_argument("sweep: theta_min values must be integers");
        scenario.controller.theta_min = static_cast<int>(value);
        return;
    case SweepVariable::FixedPower:
        scenario.baseline_power_dbm = value;
        return;
    case SweepVariable::AntennaMode:
        if (value == 0.0)
            scenario.antenna_mode = AntennaMode::Siso;
        else if (value == 1.0)
            scenario.antenna_mode = AntennaMode::Simo;
        else if (value == 2.0)
            scenario.antenna_mode = AntennaMode::Mimo;
        else
            throw std::invalid_argument("sweep: antenna_mode values are 0 (siso), 1 (simo) or 2 (mimo)");
        return;
    }
}

unsigned worker_threads()
{
    if (const char* env = std::getenv("HSDPA_EE_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && n > 0)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SeriesPoint> sweep(const ScenarioConfig& scenario, const SweepSpec& spec)
{
    if (spec.values.empty())
        throw std::invalid_argument("sweep: value list is empty");
    if (spec.repetitions < 1)
        throw std::invalid_argument("sweep: repetitions must be positive");
    if (spec.strategies.empty())
        throw std::invalid_argument("sweep: no strategy selected");

    const std::vector<AntennaMode> modes =
        spec.modes.empty() ? std::vector<AntennaMode>{scenario.antenna_mode} : spec.modes;
    const bool label_mode = modes.size() > 1;

    std::vector<SeriesPoint> points;
    std::vector<ScenarioConfig> configs;
    for (const double value : spec.values) {
        for (const auto mode : modes) {
            for (const auto strategy : spec.strategies) {
                ScenarioConfig c = scenario;
                c.antenna_mode = mode;
                c.strategy = strategy;
                apply_sweep_value(c, spec.variable, value);
                c.validate();
                SeriesPoint p;
                p.value = value;
                p.strategy = c.strategy;
                p.mode = c.antenna_mode;
                p.label = std::string(to_string(p.strategy));
                if (label_mode)
                    p.label += ":" + std::string(to_string(p.mode));
                p.reps.resize(static_cast<std::size_t>(spec.repetitions));
                points.push_back(std::move(p));
                configs.push_back(std::move(c));
            }
        }
    }

    const std::size_t reps = static_cast<std::size_t>(spec.repetitions);
    const std::size_t jobs = points.size() * reps;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs; j = next++) {
            const std::size_t pi = j / reps;
            const std::size_t r = j % reps;
            try {
                ScenarioConfig c = configs[pi];
                c.seed = derive_seed(scenario.seed, r);
                points[pi].reps[r] = run(c, false).metrics;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(worker_threads(), jobs));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);

    for (auto& p : points) {
        double sum = 0.0;
        double reconf = 0.0;
        double thr = 0.0;
        for (const auto& m : p.reps) {
            sum += m.avg_ee_bits_per_joule;
            reconf += m.reconfig_count;
            thr += m.throughput_bps;
        }
        const double n = static_cast<double>(p.reps.size());
        p.mean_ee = sum / n;
        p.mean_reconfigs = reconf / n;
        p.mean_throughput = thr / n;
        double ss = 0.0;
        for (const auto& m : p.reps)
            ss += (m.avg_ee_bits_per_joule - p.mean_ee) * (m.avg_ee_bits_per_joule - p.mean_ee);
        p.std_ee = p.reps.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    }
    return points;
}

}  // namespace hsdpa_ee
