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

#include "hsdpa_ee/ee_controller.hpp"
#include "hsdpa_ee/link_channel.hpp"
#include "hsdpa_ee/mcs_table.hpp"
#include "hsdpa_ee/mimo_dtxaa.hpp"
#include "hsdpa_ee/power_model.hpp"
#include "hsdpa_ee/report.hpp"
#include "hsdpa_ee/sim_engine.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace hsdpa_ee;

namespace {

constexpr int kSeeds = 20;
// Student t quantiles for kSeeds - 1 degrees of freedom.
constexpr double kT975 = 2.093;
constexpr double kT95 = 1.729;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Stats {
    double mean = 0.0;
    double se = 0.0;
};

Stats stats(const std::vector<double>& x)
{
    Stats s;
    for (const double v : x)
        s.mean += v;
    s.mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (const double v : x)
        ss += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
    return s;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const SeriesPoint& find_point(const std::vector<SeriesPoint>& pts, double value, Strategy s,
                              AntennaMode mode = AntennaMode::Simo)
{
    for (const auto& p : pts)
        if (p.value == value && p.strategy == s && p.mode == mode)
            return p;
    throw std::logic_error("missing sweep point");
}

// Per-seed relative gain of the semi-static strategy over the fixed baseline.
Stats paired_gain(const std::vector<SeriesPoint>& pts, double value)
{
    const auto& semi = find_point(pts, value, Strategy::SemiStatic).reps;
    const auto& base = find_point(pts, value, Strategy::FixedBaseline).reps;
    std::vector<double> g;
    for (std::size_t r = 0; r < semi.size(); ++r)
        g.push_back(semi[r].avg_ee_bits_per_joule / base[r].avg_ee_bits_per_joule - 1.0);
    return stats(g);
}

// Non-increasing sequence, tolerating one step up that the 95% intervals cover.
bool non_increasing(const std::vector<Stats>& g, int allowed_inversions, std::string& note)
{
    int inversions = 0;
    bool ok = true;
    for (std::size_t k = 1; k < g.size(); ++k) {
        if (g[k].mean <= g[k - 1].mean)
            continue;
        const double half = kT975 * std::hypot(g[k].se, g[k - 1].se);
        const bool covered = g[k].mean - g[k - 1].mean <= half;
        note += fmt(" inversion at step %zu (+%.4f, 95%% half-width %.4f%s)", k, g[k].mean - g[k - 1].mean, half,
                    covered ? ", covered" : ", not covered");
        ++inversions;
        ok = ok && covered;
    }
    return ok && inversions <= allowed_inversions;
}

std::string gains_text(const std::vector<double>& values, const std::vector<Stats>& g)
{
    std::string s;
    for (std::size_t k = 0; k < g.size(); ++k)
        s += fmt("%s%g:%.1f%%+-%.1f", k ? " " : "", values[k], 100.0 * g[k].mean, 100.0 * kT975 * g[k].se);
    return s;
}

Outcome power_model_exact()
{
    PowerModelParams pm;
    const double got = total_power(19.9526, pm);
    // 19.9526 / 0.38 + 6 + 6, carried to more digits than the rounded 64.507.
    constexpr double hand = 64.50684210526316;
    const bool rounds = std::round(got * 1000.0) == 64507.0;
    return {std::abs(got - hand) <= 1e-6 && rounds, fmt("total_power = %.9f W (hand value %.9f)", got, hand)};
}

Outcome shannon_shape()
{
    const ExperimentSpec spec = preset("figure1");
    const ChannelParams ch = spec.scenario.channel();
    const double n0 = ch.interference_plus_noise_w() / (db_to_linear(path_gain_db(ch.distance_m)) * ch.bandwidth_hz);
    const PowerModelParams pm = spec.scenario.effective_power_model();
    const double w = ch.bandwidth_hz;
    const double p_max = dbm_to_watt(43.0);
    constexpr int n = 100000;

    int direction_changes = 0;
    int rising = 1;
    double prev = shannon_ee(0.0, n0, w, pm);
    double best = prev;
    double best_p = 0.0;
    for (int k = 1; k < n; ++k) {
        const double p = p_max * k / (n - 1);
        const double ee = shannon_ee(p, n0, w, pm);
        const int dir = ee > prev ? 1 : (ee < prev ? -1 : 0);
        if (dir != 0 && dir != rising) {
            ++direction_changes;
            rising = dir;
        }
        if (ee > best) {
            best = ee;
            best_p = p;
        }
        prev = ee;
    }
    const double golden = optimal_shannon_power(pm, n0, w, p_max);
    const double rel = std::abs(golden - best_p) / best_p;
    return {direction_changes <= 1 && rel <= 1e-3,
            fmt("direction changes %d, grid argmax %.6f W, golden %.6f W, rel diff %.2e", direction_changes, best_p,
                golden, rel)};
}

Outcome sinr_difference()
{
    const ChannelParams p = resolve_channel(LinkBudget{}, 1, 2);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> power(0.0, 46.0);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        Rng fade(rng());
        ChannelState s = init_fading(p, fade);
        s = step_fading(s, 1e-3 * static_cast<double>(rng() % 100000));
        const double a = power(rng);
        const double b = power(rng);
        const double diff = hs_sinr_db(dbm_to_watt(a), s, p) - hs_sinr_db(dbm_to_watt(b), s, p);
        worst = std::max(worst, std::abs(diff - (a - b)));
    }
    return {worst <= 1e-9, fmt("max |dSINR - dP| = %.3e dB", worst)};
}

McsTable random_table(std::mt19937_64& rng)
{
    const int n = std::uniform_int_distribution<int>(2, 30)(rng);
    std::uniform_real_distribution<double> step(0.2, 3.0);
    std::vector<McsEntry> e;
    double thr = std::uniform_real_distribution<double>(-10.0, 0.0)(rng);
    int tbs = std::uniform_int_distribution<int>(50, 300)(rng);
    for (int k = 1; k <= n; ++k) {
        e.push_back({k, thr, tbs, 2, 1});
        thr += step(rng);
        tbs += std::uniform_int_distribution<int>(0, 2000)(rng);
    }
    return McsTable(std::move(e));
}

Outcome argmax_oracle()
{
    std::mt19937_64 rng(404);
    int mismatches = 0;
    std::set<std::string> branches;
    for (int n = 0; n < 1000; ++n) {
        const McsTable t = random_table(rng);
        ControllerConfig cfg;
        cfg.p_max_dbm = std::uniform_real_distribution<double>(20.0, 46.0)(rng);
        cfg.theta_min = std::uniform_int_distribution<int>(1, t.max_cqi())(rng);
        PowerModelParams pm;
        pm.eta = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
        pm.p_cir_w = std::uniform_real_distribution<double>(0.0, 20.0)(rng);
        pm.p_sta_w = std::uniform_real_distribution<double>(0.0, 20.0)(rng);
        pm.active_antennas = std::uniform_int_distribution<int>(1, 2)(rng);
        const double p = std::uniform_real_distribution<double>(10.0, 43.0)(rng);
        const int i = std::uniform_int_distribution<int>(1, t.max_cqi())(rng);
        const double delta = std::uniform_real_distribution<double>(-6.0, 6.0)(rng);

        int best = 0;
        double best_ee = -1.0;
        int theta_max = 1;
        auto p_of = [&](int j) { return p + t.threshold_db(j) - t.threshold_db(i) + delta; };
        for (int j = 1; j <= t.max_cqi(); ++j) {
            const double pw = std::pow(10.0, (p_of(j) - 30.0) / 10.0);
            const double ee = t.tbs_bits(j) /
                              (cfg.tti_ms * 1e-3 * (pw / pm.eta + pm.active_antennas * pm.p_cir_w + pm.p_sta_w));
            if (ee > best_ee) {
                best_ee = ee;
                best = j;
            }
            if (p_of(j) <= cfg.p_max_dbm + 1e-9)
                theta_max = j;
        }
        const int theta = std::min(std::max(best, cfg.theta_min), theta_max);
        const double power = std::min(std::max(p_of(best), p_of(cfg.theta_min)), cfg.p_max_dbm);
        if (best < cfg.theta_min)
            branches.insert("theta_min");
        if (best > theta_max)
            branches.insert("theta_max");
        if (p_of(best) > cfg.p_max_dbm)
            branches.insert("p_max");
        if (best >= cfg.theta_min && best <= theta_max)
            branches.insert("interior");

        const Selection sel = select_optimal(p, i, delta, t, cfg, pm);
        if (sel.theta != theta || std::abs(sel.power_dbm - power) > 1e-9)
            ++mismatches;
    }
    return {mismatches == 0 && branches.size() == 4,
            fmt("%d mismatches over 1000 instances, %zu of 4 clamp branches exercised", mismatches, branches.size())};
}

Outcome trigger_spacing()
{
    ScenarioConfig s;
    s.duration_ttis = 100000;
    s.seed = 5;
    const RunResult r = run(s);
    const double tti = s.controller.tti_ms;
    double lo = 1e300;
    double hi = 0.0;
    int last = -1;
    int count = 0;
    for (const auto& rec : r.trace) {
        if (!rec.reconfigured)
            continue;
        if (last >= 0) {
            const double gap = (rec.tti - last) * tti;
            lo = std::min(lo, gap);
            hi = std::max(hi, gap);
        }
        last = rec.tti;
        ++count;
    }
    const bool ok = count > 1 && lo > s.controller.gamma_prohibit_ms && hi <= s.controller.gamma_periodic_ms + tti;
    return {ok, fmt("%d reconfigurations, spacing %.0f..%.0f ms", count, lo, hi)};
}

Outcome pedestrian_trends()
{
    ScenarioConfig s;
    s.link.speed_kmh = 3.0;
    SweepSpec spec;
    spec.variable = SweepVariable::Speed;
    spec.values = {3.0};
    spec.repetitions = kSeeds;
    const auto pts = sweep(s, spec);
    const auto& semi = find_point(pts, 3.0, Strategy::SemiStatic);
    const auto& base = find_point(pts, 3.0, Strategy::FixedBaseline);
    const auto& per_tti = find_point(pts, 3.0, Strategy::PerTtiOptimal);

    std::vector<double> diff;
    for (std::size_t r = 0; r < semi.reps.size(); ++r)
        diff.push_back(semi.reps[r].avg_ee_bits_per_joule - base.reps[r].avg_ee_bits_per_joule);
    const Stats d = stats(diff);
    const bool confident = d.mean - kT95 * d.se > 0.0;
    const double gain = semi.mean_ee / base.mean_ee - 1.0;
    const double vs_per_tti = semi.mean_ee / per_tti.mean_ee;
    const double reconfig_ratio = semi.mean_reconfigs / per_tti.mean_reconfigs;
    return {confident && gain >= 0.05 && vs_per_tti >= 0.9 && reconfig_ratio <= 0.2,
            fmt("EE fixed %.0f, per-TTI %.0f, semi-static %.0f bit/J; gain %.1f%% (95%% lower bound on the "
                "difference %.0f); semi/per-TTI %.3f; reconfig ratio %.3f",
                base.mean_ee, per_tti.mean_ee, semi.mean_ee, 100.0 * gain, d.mean - kT95 * d.se, vs_per_tti,
                reconfig_ratio)};
}

Outcome speed_trend()
{
    ScenarioConfig s;
    SweepSpec spec;
    spec.variable = SweepVariable::Speed;
    spec.values = {3.0, 30.0, 120.0};
    spec.repetitions = kSeeds;
    spec.strategies = {Strategy::FixedBaseline, Strategy::SemiStatic};
    const auto pts = sweep(s, spec);
    std::vector<Stats> g;
    for (const double v : spec.values)
        g.push_back(paired_gain(pts, v));
    std::string note;
    const bool trend = non_increasing(g, 1, note);
    const bool positive = g.back().mean - kT95 * g.back().se > 0.0;
    return {trend && positive, "gain by speed " + gains_text(spec.values, g) + note};
}

Outcome theta_trend()
{
    ScenarioConfig s;
    SweepSpec spec;
    spec.variable = SweepVariable::ThetaMin;
    spec.values = {1.0, 20.0, 25.0, 28.0};
    spec.repetitions = kSeeds;
    spec.strategies = {Strategy::FixedBaseline, Strategy::SemiStatic};
    const auto pts = sweep(s, spec);
    std::vector<Stats> g;
    for (const double v : spec.values)
        g.push_back(paired_gain(pts, v));
    std::string note;
    const bool trend = non_increasing(g, 0, note);
    return {trend, "gain by theta_min " + gains_text(spec.values, g) + note};
}

Outcome mode_crossover()
{
    ExperimentSpec e = preset("figure10");
    const auto pts = sweep(e.scenario, e.sweep);
    std::vector<double> simo;
    std::vector<double> mimo;
    for (const double v : e.sweep.values) {
        simo.push_back(find_point(pts, v, Strategy::FixedBaseline, AntennaMode::Simo).mean_ee);
        mimo.push_back(find_point(pts, v, Strategy::FixedBaseline, AntennaMode::Mimo).mean_ee);
    }
    const auto n = static_cast<int>(simo.size());
    const int peak_simo = static_cast<int>(std::max_element(simo.begin(), simo.end()) - simo.begin());
    const int peak_mimo = static_cast<int>(std::max_element(mimo.begin(), mimo.end()) - mimo.begin());
    const bool interior = peak_simo > 0 && peak_simo < n - 1 && peak_mimo > 0 && peak_mimo < n - 1;

    int cross = -1;
    for (int c = 1; c < n && cross < 0; ++c) {
        bool ok = true;
        for (int k = 0; k < n; ++k)
            ok = ok && (k < c ? simo[std::size_t(k)] > mimo[std::size_t(k)] : mimo[std::size_t(k)] >= simo[std::size_t(k)]);
        if (ok)
            cross = c;
    }
    const auto& v = e.sweep.values;
    return {interior && cross > 0,
            fmt("SIMO peak %.0f dBm, MIMO peak %.0f dBm, crossover %s", v[std::size_t(peak_simo)],
                v[std::size_t(peak_mimo)], cross > 0 ? fmt("between %.0f and %.0f dBm", v[std::size_t(cross - 1)], v[std::size_t(cross)]).c_str() : "none")};
}

Outcome ee_tbs_equivalence()
{
    const ChannelParams p = resolve_channel(LinkBudget{}, 2, 2);
    const McsTable t = default_table();
    PowerModelParams pm;
    pm.active_antennas = 2;
    const auto book = pci_codebook();
    std::mt19937_64 rng(1010);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> power(0.0, 43.0);
    int mismatches = 0;
    int dual = 0;
    for (int n = 0; n < 1000; ++n) {
        const double p_dbm = power(rng);
        const double p_w = dbm_to_watt(p_dbm);
        std::vector<Eigen::Matrix2cd> taps(2);
        for (auto& h : taps)
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    h(r, c) = {g(rng), g(rng)};

        int best_tbs = 0;
        int by_ee_tbs = 0;
        double best_ee = 0.0;
        auto consider = [&](int tbs) {
            best_tbs = std::max(best_tbs, tbs);
            const double ee = tbs > 0 ? estimate_ee(p_dbm, tbs, pm, 2.0) : 0.0;
            if (ee > best_ee) {
                best_ee = ee;
                by_ee_tbs = tbs;
            }
        };
        for (const auto& w : book) {
            const int c = cqi_from_sinr(single_stream_sinr_db(taps, w, p_w, p), t);
            consider(c > 0 ? t.tbs_bits(c) : 0);
            const auto [s1, s2] = per_stream_sinr(taps, w, p_w / 2.0, p);
            const int c1 = cqi_from_sinr(s1, t);
            const int c2 = cqi_from_sinr(s2, t);
            consider(c1 > 0 && c2 > 0 ? t.tbs_bits(c1) + t.tbs_bits(c2) : 0);
        }
        const MimoFeedback fb = select_mode_and_feedback(taps, t, p_w, p);
        dual += fb.mode == StreamMode::Dual;
        if (feedback_sum_tbs(fb, t) != by_ee_tbs || by_ee_tbs != best_tbs)
            ++mismatches;
    }
    return {mismatches == 0, fmt("%d mismatches over 1000 draws (%d dual-stream choices)", mismatches, dual)};
}

Outcome codebook()
{
    double worst = 0.0;
    for (const auto& w : pci_codebook()) {
        worst = std::max(worst, std::abs(std::norm(w.w1) + std::norm(w.w2) - 1.0));
        worst = std::max(worst, std::abs(std::norm(w.w3) + std::norm(w.w4) - 1.0));
        worst = std::max(worst, std::abs(std::conj(w.w1) * w.w3 + std::conj(w.w2) * w.w4));
        worst = std::max(worst, std::abs(w.w1 - w.w3));
        worst = std::max(worst, std::abs(w.w4 + w.w2));
    }
    return {worst <= 1e-15, fmt("max invariant residual %.1e", worst)};
}

Outcome outer_loop()
{
    ScenarioConfig s;
    s.duration_ttis = 100000;
    s.seed = 12;
    const RunMetrics m = run(s, false).metrics;
    const double target = s.controller.bler_target;
    return {std::abs(m.nack_rate - target) <= 0.03,
            fmt("first-transmission NACK rate %.4f (all transmissions %.4f), target %.2f", m.nack_rate, m.nack_rate_all,
                target)};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance checks"};
    std::vector<int> known;
    std::vector<int> only;
    app.add_option("--known-failure", known, "criteria whose failure is documented and does not fail the run");
    app.add_option("--only", only, "run only these criteria");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"power model exactness", power_model_exact},
        {"Shannon EE unimodal, golden section matches grid", shannon_shape},
        {"SINR difference equals power difference", sinr_difference},
        {"select_optimal matches brute force", argmax_oracle},
        {"reconfiguration spacing", trigger_spacing},
        {"semi-static gain at 3 km/h", pedestrian_trends},
        {"gain non-increasing with speed", speed_trend},
        {"gain non-increasing with theta_min", theta_trend},
        {"SIMO/MIMO static-power crossover", mode_crossover},
        {"EE and sum-TBS mode choice agree", ee_tbs_equivalence},
        {"precoder codebook invariants", codebook},
        {"outer loop meets the NACK target", outer_loop},
    };

    int hard_failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool is_known = std::find(known.begin(), known.end(), id) != known.end();
        std::printf("%-4s criterion %2d  %s: %s [%.1f s]%s\n", o.pass ? "PASS" : "FAIL", id,
                    criteria[k].first.c_str(), o.detail.c_str(), secs, !o.pass && is_known ? " (known failure)" : "");
        std::fflush(stdout);
        if (!o.pass && !is_known)
            ++hard_failures;
    }
    return hard_failures == 0 ? 0 : 1;
}
