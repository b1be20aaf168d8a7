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

#include "hsdpa_ee/report.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace hsdpa_ee {

using detail::format_double;
using detail::parse_double;
using detail::parse_int;
using detail::split;
using detail::split_lines;
using detail::trim;

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
{
}

namespace {

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("cannot read '" + path.string() + "'");
    return ss.str();
}

double to_double(std::string_view v, int line)
{
    double d = 0.0;
    if (!parse_double(v, d) || !std::isfinite(d))
        throw ConfigError(line, "expected a number, got '" + std::string(v) + "'");
    return d;
}

int to_int(std::string_view v, int line)
{
    int i = 0;
    if (!parse_int(v, i))
        throw ConfigError(line, "expected an integer, got '" + std::string(v) + "'");
    return i;
}

// "a, b, c" or "start:stop:step" (inclusive stop).
std::vector<double> to_values(std::string_view v, int line)
{
    std::vector<double> out;
    if (v.find(':') != std::string_view::npos) {
        const auto parts = split(v, ':');
        if (parts.size() != 3)
            throw ConfigError(line, "range must be start:stop:step");
        const double start = to_double(parts[0], line);
        const double stop = to_double(parts[1], line);
        const double step = to_double(parts[2], line);
        if (!(step > 0.0) || stop < start)
            throw ConfigError(line, "range needs step > 0 and stop >= start");
        const auto n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
        for (int k = 0; k <= n; ++k)
            out.push_back(start + k * step);
        return out;
    }
    if (trim(v).empty())
        return out;
    for (const auto item : split(v, ','))
        out.push_back(to_double(item, line));
    return out;
}

template <typename T, typename F>
std::vector<T> to_list(std::string_view v, int line, F parse)
{
    std::vector<T> out;
    if (trim(v).empty())
        return out;
    for (const auto item : split(v, ',')) {
        try {
            out.push_back(parse(item));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(line, e.what());
        }
    }
    return out;
}

using Setter = std::function<void(ExperimentSpec&, std::string_view, int)>;

struct ParseContext {
    std::filesystem::path base_dir;
    bool kind_given = false;
    bool sweep_seen = false;
    bool shannon_seen = false;
};

std::map<std::string, Setter> make_setters(ParseContext& ctx)
{
    std::map<std::string, Setter> s;
    s["experiment.name"] = [](ExperimentSpec& e, std::string_view v, int line) {
        if (v.empty())
            throw ConfigError(line, "name must not be empty");
        e.name = std::string(v);
    };
    s["experiment.kind"] = [&ctx](ExperimentSpec& e, std::string_view v, int line) {
        if (v == "run")
            e.kind = ExperimentKind::Run;
        else if (v == "sweep")
            e.kind = ExperimentKind::Sweep;
        else if (v == "shannon")
            e.kind = ExperimentKind::Shannon;
        else
            throw ConfigError(line, "kind must be run, sweep or shannon");
        ctx.kind_given = true;
    };
    s["experiment.output_dir"] = [](ExperimentSpec& e, std::string_view v, int) { e.output_dir = std::string(v); };

    s["scenario.antenna_mode"] = [](ExperimentSpec& e, std::string_view v, int line) {
        try {
            e.scenario.antenna_mode = parse_antenna_mode(v);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(line, ex.what());
        }
    };
    s["scenario.strategy"] = [](ExperimentSpec& e, std::string_view v, int line) {
        try {
            e.scenario.strategy = parse_strategy(v);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(line, ex.what());
        }
    };
    s["scenario.strategies"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.run_strategies = to_list<Strategy>(v, line, parse_strategy);
    };
    s["scenario.duration_ttis"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.duration_ttis = to_int(v, line);
    };
    s["scenario.seed"] = [](ExperimentSpec& e, std::string_view v, int line) {
        std::uint64_t seed = 0;
        if (!parse_int(v, seed))
            throw ConfigError(line, "seed must be a non-negative integer");
        e.scenario.seed = seed;
    };
    s["scenario.feedback_delay_ttis"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.feedback_delay_ttis = to_int(v, line);
    };
    s["scenario.baseline_power_dbm"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.baseline_power_dbm = to_double(v, line);
    };
    s["scenario.decode_margin_db"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.decode_margin_db = to_double(v, line);
    };
    s["scenario.max_retransmissions"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.max_retransmissions = to_int(v, line);
    };
    s["scenario.soft_combining"] = [](ExperimentSpec& e, std::string_view v, int line) {
        if (v == "true" || v == "1")
            e.scenario.soft_combining = true;
        else if (v == "false" || v == "0")
            e.scenario.soft_combining = false;
        else
            throw ConfigError(line, "expected true or false, got '" + std::string(v) + "'");
    };
    s["scenario.table"] = [&ctx](ExperimentSpec& e, std::string_view v, int line) {
        std::filesystem::path p{std::string(v)};
        if (p.is_relative())
            p = ctx.base_dir / p;
        try {
            e.scenario.table = std::make_shared<const McsTable>(load_table(read_file(p)));
        } catch (const TableError& ex) {
            throw ConfigError(line, "table '" + p.string() + "': " + ex.what());
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(line, "table '" + p.string() + "': " + ex.what());
        }
    };

    auto link = [&s](const std::string& key, double LinkBudget::*field) {
        s["link." + key] = [field](ExperimentSpec& e, std::string_view v, int line) {
            e.scenario.link.*field = to_double(v, line);
        };
    };
    link("distance_m", &LinkBudget::distance_m);
    link("speed_kmh", &LinkBudget::speed_kmh);
    link("carrier_hz", &LinkBudget::carrier_hz);
    link("bandwidth_hz", &LinkBudget::bandwidth_hz);
    link("sf", &LinkBudget::sf);
    link("alpha", &LinkBudget::alpha);
    link("cell_power_dbm", &LinkBudget::cell_power_dbm);
    link("geometry_db", &LinkBudget::geometry_db);
    link("geometry_ref_distance_m", &LinkBudget::geometry_ref_distance_m);
    link("noise_figure_db", &LinkBudget::noise_figure_db);
    s["link.sinusoids"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.link.sinusoids = to_int(v, line);
    };

    auto ctrl = [&s](const std::string& key, double ControllerConfig::*field) {
        s["controller." + key] = [field](ExperimentSpec& e, std::string_view v, int line) {
            e.scenario.controller.*field = to_double(v, line);
        };
    };
    ctrl("p_max_dbm", &ControllerConfig::p_max_dbm);
    ctrl("delta_threshold", &ControllerConfig::delta_threshold);
    ctrl("gamma_prohibit_ms", &ControllerConfig::gamma_prohibit_ms);
    ctrl("gamma_periodic_ms", &ControllerConfig::gamma_periodic_ms);
    ctrl("tti_ms", &ControllerConfig::tti_ms);
    ctrl("bler_target", &ControllerConfig::bler_target);
    ctrl("offset_step_down_db", &ControllerConfig::offset_step_down_db);
    ctrl("offset_step_up_db", &ControllerConfig::offset_step_up_db);
    ctrl("offset_clamp_db", &ControllerConfig::offset_clamp_db);
    ctrl("ee_smoothing", &ControllerConfig::ee_smoothing);
    s["controller.theta_min"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.controller.theta_min = to_int(v, line);
    };
    s["controller.offset_step_db"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.controller.set_offset_steps(to_double(v, line));
    };

    s["power.eta"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.power_model.eta = to_double(v, line);
    };
    s["power.p_cir_w"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.power_model.p_cir_w = to_double(v, line);
    };
    s["power.p_sta_w"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.power_model.p_sta_w = to_double(v, line);
    };

    s["mimo.pair_tolerance_db"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.dual.pair_tolerance_db = to_double(v, line);
    };
    s["mimo.power_factor"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.scenario.dual.power_factor = to_double(v, line);
    };

    s["sweep.variable"] = [](ExperimentSpec& e, std::string_view v, int line) {
        try {
            e.sweep.variable = parse_sweep_variable(v);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(line, ex.what());
        }
    };
    s["sweep.values"] = [](ExperimentSpec& e, std::string_view v, int line) { e.sweep.values = to_values(v, line); };
    s["sweep.repetitions"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.sweep.repetitions = to_int(v, line);
    };
    s["sweep.strategies"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.sweep.strategies = to_list<Strategy>(v, line, parse_strategy);
    };
    s["sweep.modes"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.sweep.modes = to_list<AntennaMode>(v, line, parse_antenna_mode);
    };

    s["shannon.powers_dbm"] = [](ExperimentSpec& e, std::string_view v, int line) {
        e.shannon_powers_dbm = to_values(v, line);
    };
    return s;
}

std::string outcome_name(TtiOutcome o)
{
    switch (o) {
    case TtiOutcome::Idle: return "idle";
    case TtiOutcome::Ack: return "ack";
    case TtiOutcome::Nack: return "nack";
    }
    return "?";
}

void apply_overrides(ExperimentSpec& spec, const CliOptions& opts)
{
    if (opts.seed)
        spec.scenario.seed = *opts.seed;
    if (opts.reps)
        spec.sweep.repetitions = *opts.reps;
    if (opts.duration)
        spec.scenario.duration_ttis = *opts.duration;
    spec.output_dir = opts.out;
}

// Loads the experiment named by the options; returns an exit code on failure.
std::optional<int> resolve_experiment(const CliOptions& opts, ExperimentSpec& spec, std::ostream& err)
{
    if (opts.config && opts.preset) {
        err << "error: --config and --preset are mutually exclusive\n";
        return kExitInvalid;
    }
    if (!opts.config && !opts.preset) {
        err << "error: one of --config or --preset is required\n";
        return kExitInvalid;
    }
    try {
        spec = opts.config ? load_config(*opts.config) : preset(*opts.preset);
    } catch (const ConfigError& e) {
        err << "parse error: " << (opts.config ? opts.config->string() + ": " : std::string()) << e.what() << "\n";
        return kExitParse;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    apply_overrides(spec, opts);
    return std::nullopt;
}

std::optional<int> open_output(const std::filesystem::path& path, std::ofstream& os, std::ostream& err)
{
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    os.open(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        err << "i/o error: cannot write '" << path.string() << "'\n";
        return kExitIo;
    }
    return std::nullopt;
}

}  // namespace

ExperimentSpec parse_config(std::string_view text, const std::filesystem::path& base_dir)
{
    ParseContext ctx{base_dir};
    const auto setters = make_setters(ctx);
    ExperimentSpec spec;
    std::string section;
    std::map<std::string, int> seen;
    int line_no = 0;
    for (const auto raw : split_lines(text)) {
        ++line_no;
        auto line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            static const char* known[] = {"experiment", "scenario", "link", "controller",
                                          "power", "mimo", "sweep", "shannon"};
            if (std::find(std::begin(known), std::end(known), section) == std::end(known))
                throw ConfigError(line_no, "unknown section [" + section + "]");
            ctx.sweep_seen = ctx.sweep_seen || section == "sweep";
            ctx.shannon_seen = ctx.shannon_seen || section == "shannon";
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(line_no, "expected 'key = value'");
        if (section.empty())
            throw ConfigError(line_no, "key outside of any section");
        const auto key = std::string(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const std::string full = section + "." + key;
        const auto it = setters.find(full);
        if (it == setters.end())
            throw ConfigError(line_no, "unknown key '" + key + "' in [" + section + "]");
        if (const auto prev = seen.find(full); prev != seen.end())
            throw ConfigError(line_no, "duplicate key '" + key + "' (first at line " + std::to_string(prev->second) + ")");
        seen[full] = line_no;
        it->second(spec, value, line_no);
    }
    if (!ctx.kind_given) {
        if (ctx.shannon_seen)
            spec.kind = ExperimentKind::Shannon;
        else if (ctx.sweep_seen)
            spec.kind = ExperimentKind::Sweep;
    }
    return spec;
}

ExperimentSpec load_config(const std::filesystem::path& path)
{
    const std::string text = read_file(path);
    return parse_config(text, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

std::vector<std::string> preset_names()
{
    return {"figure1", "figure2", "figure5", "figure6", "figure7", "figure8", "figure9", "figure10", "figure11"};
}

ExperimentSpec preset(std::string_view name)
{
    ExperimentSpec e;
    e.name = std::string(name);
    e.scenario.duration_ttis = 10000;
    e.sweep.repetitions = 5;
    if (name == "figure1") {
        e.kind = ExperimentKind::Shannon;
        for (int k = 0; k <= 530; ++k)
            e.shannon_powers_dbm.push_back(-10.0 + 0.1 * k);
    } else if (name == "figure2") {
        e.kind = ExperimentKind::Sweep;
        e.scenario.antenna_mode = AntennaMode::Siso;
        e.sweep.variable = SweepVariable::FixedPower;
        for (int p = 10; p <= 43; ++p)
            e.sweep.values.push_back(p);
        e.sweep.strategies = {Strategy::FixedBaseline};
        e.sweep.repetitions = 3;
    } else if (name == "figure5" || name == "figure6") {
        e.kind = ExperimentKind::Run;
        e.scenario.duration_ttis = 200;
        e.run_strategies = {Strategy::FixedBaseline, Strategy::PerTtiOptimal, Strategy::SemiStatic};
    } else if (name == "figure7") {
        e.kind = ExperimentKind::Sweep;
        e.sweep.variable = SweepVariable::Speed;
        e.sweep.values = {3, 30, 120};
    } else if (name == "figure8") {
        e.kind = ExperimentKind::Sweep;
        e.sweep.variable = SweepVariable::Distance;
        e.sweep.values = {100, 200, 300, 400, 500, 600, 700};
    } else if (name == "figure9") {
        e.kind = ExperimentKind::Sweep;
        e.sweep.variable = SweepVariable::ThetaMin;
        e.sweep.values = {1, 20, 25, 28};
        e.sweep.strategies = {Strategy::FixedBaseline, Strategy::SemiStatic};
    } else if (name == "figure10") {
        e.kind = ExperimentKind::Sweep;
        e.sweep.variable = SweepVariable::FixedPower;
        for (int p = 10; p <= 43; ++p)
            e.sweep.values.push_back(p);
        e.sweep.strategies = {Strategy::FixedBaseline};
        e.sweep.modes = {AntennaMode::Simo, AntennaMode::Mimo};
        e.sweep.repetitions = 3;
        e.scenario.duration_ttis = 5000;
    } else if (name == "figure11") {
        e.kind = ExperimentKind::Sweep;
        e.sweep.variable = SweepVariable::Distance;
        e.sweep.values = {100, 200, 300, 400, 500, 600, 700};
        e.sweep.strategies = {Strategy::SemiStatic};
        e.sweep.modes = {AntennaMode::Simo, AntennaMode::Mimo};
        e.scenario.duration_ttis = 5000;
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    return e;
}

std::vector<ShannonPoint> shannon_curve(const ExperimentSpec& spec)
{
    // Noise referred to the transmitter: interference plus noise over the
    // mean path gain, per Hz.
    const ChannelParams ch = spec.scenario.channel();
    const double pl = db_to_linear(path_gain_db(ch.distance_m));
    const double n0 = ch.interference_plus_noise_w() / (pl * ch.bandwidth_hz);
    const PowerModelParams pm = spec.scenario.effective_power_model();
    std::vector<ShannonPoint> out;
    out.reserve(spec.shannon_powers_dbm.size());
    for (const double p_dbm : spec.shannon_powers_dbm) {
        const double p = dbm_to_watt(p_dbm);
        out.push_back({p_dbm, shannon_se(p, n0, ch.bandwidth_hz), shannon_ee(p, n0, ch.bandwidth_hz, pm)});
    }
    return out;
}

std::vector<SeriesRow> series_rows(SweepVariable variable, const std::vector<SeriesPoint>& points)
{
    std::vector<SeriesRow> rows;
    rows.reserve(points.size());
    for (const auto& p : points)
        rows.push_back({std::string(to_string(variable)), p.value, p.label, p.mean_ee, p.std_ee, p.mean_reconfigs,
                        p.mean_throughput});
    return rows;
}

std::vector<SeriesRow> series_rows(const std::vector<ShannonPoint>& curve, double bandwidth_hz)
{
    std::vector<SeriesRow> rows;
    rows.reserve(curve.size());
    for (const auto& c : curve)
        rows.push_back({"power_dbm", c.power_dbm, "shannon", c.ee, 0.0, 0.0, c.se * bandwidth_hz});
    return rows;
}

void write_trace_csv(std::ostream& os, std::string_view strategy, const std::vector<TtiRecord>& trace, bool header)
{
    if (header)
        os << "strategy,tti,p_tx_dbm,mcs,mcs2,outcome,outcome2,sinr_db,delivered_bits,energy_j,ee_bits_per_joule,"
              "delta_db,reconfigured,retransmission\n";
    for (const auto& r : trace) {
        os << strategy << ',' << r.tti << ',' << format_double(r.p_tx_dbm) << ',' << r.mcs << ',' << r.mcs2 << ','
           << outcome_name(r.outcome) << ',' << outcome_name(r.outcome2) << ',' << format_double(r.sinr_db) << ','
           << format_double(r.delivered_bits) << ',' << format_double(r.energy_j) << ','
           << format_double(r.energy_j > 0.0 ? r.delivered_bits / r.energy_j : 0.0) << ','
           << format_double(r.delta_db) << ',' << (r.reconfigured ? 1 : 0) << ',' << (r.retransmission ? 1 : 0)
           << '\n';
    }
}

void write_metrics_csv(std::ostream& os, const std::vector<std::pair<std::string, RunMetrics>>& rows)
{
    os << "strategy,avg_ee_bits_per_joule,throughput_bps,reconfig_count,nack_rate,nack_rate_all,total_bits,"
          "total_energy_j,mean_power_dbm\n";
    for (const auto& [name, m] : rows)
        os << name << ',' << format_double(m.avg_ee_bits_per_joule) << ',' << format_double(m.throughput_bps) << ','
           << m.reconfig_count << ',' << format_double(m.nack_rate) << ',' << format_double(m.nack_rate_all) << ','
           << format_double(m.total_bits) << ','
           << format_double(m.total_energy_j) << ',' << format_double(m.mean_power_dbm) << '\n';
}

void write_series_csv(std::ostream& os, const std::vector<SeriesRow>& rows)
{
    os << "variable,value,strategy,mean_ee,std_ee,mean_reconfigs,mean_throughput\n";
    for (const auto& r : rows)
        os << r.variable << ',' << format_double(r.value) << ',' << r.strategy << ',' << format_double(r.mean_ee) << ','
           << format_double(r.std_ee) << ',' << format_double(r.mean_reconfigs) << ','
           << format_double(r.mean_throughput) << '\n';
}

std::vector<SeriesRow> read_series_csv(std::string_view text)
{
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != "variable,value,strategy,mean_ee,std_ee,mean_reconfigs,mean_throughput")
        throw ConfigError(1, "unexpected series header");
    std::vector<SeriesRow> rows;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const int line = static_cast<int>(k) + 1;
        if (trim(lines[k]).empty())
            continue;
        const auto f = split(lines[k], ',');
        if (f.size() != 7)
            throw ConfigError(line, "expected 7 fields");
        rows.push_back({std::string(f[0]), to_double(f[1], line), std::string(f[2]), to_double(f[3], line),
                        to_double(f[4], line), to_double(f[5], line), to_double(f[6], line)});
    }
    return rows;
}

std::vector<double> smoothed_trace_ee(const std::vector<TtiRecord>& trace, int window)
{
    if (window < 1)
        throw std::invalid_argument("smoothed_trace_ee: window must be positive");
    std::vector<double> out(trace.size());
    double bits = 0.0;
    double energy = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        bits += trace[k].delivered_bits;
        energy += trace[k].energy_j;
        if (k >= static_cast<std::size_t>(window)) {
            bits -= trace[k - static_cast<std::size_t>(window)].delivered_bits;
            energy -= trace[k - static_cast<std::size_t>(window)].energy_j;
        }
        out[k] = energy > 0.0 ? bits / energy : 0.0;
    }
    return out;
}

int cmd_run(const CliOptions& opts, std::ostream& out, std::ostream& err)
{
    ExperimentSpec spec;
    if (auto rc = resolve_experiment(opts, spec, err))
        return *rc;
    if (spec.kind != ExperimentKind::Run) {
        err << "error: experiment '" << spec.name << "' is a sweep; use the sweep command\n";
        return kExitInvalid;
    }
    const std::vector<Strategy> strategies =
        spec.run_strategies.empty() ? std::vector<Strategy>{spec.scenario.strategy} : spec.run_strategies;

    std::vector<std::pair<std::string, RunResult>> results;
    try {
        for (const auto s : strategies) {
            ScenarioConfig c = spec.scenario;
            c.strategy = s;
            results.emplace_back(std::string(to_string(s)), run(c));
        }
    } catch (const std::invalid_argument& e) {
        err << "invalid scenario: " << e.what() << "\n";
        return kExitInvalid;
    }

    std::ofstream trace_os;
    std::ofstream metrics_os;
    if (auto rc = open_output(opts.out / "trace.csv", trace_os, err))
        return *rc;
    if (auto rc = open_output(opts.out / "metrics.csv", metrics_os, err))
        return *rc;
    std::vector<std::pair<std::string, RunMetrics>> rows;
    bool first = true;
    for (const auto& [name, r] : results) {
        write_trace_csv(trace_os, name, r.trace, first);
        first = false;
        rows.emplace_back(name, r.metrics);
    }
    write_metrics_csv(metrics_os, rows);
    trace_os.flush();
    metrics_os.flush();
    if (!trace_os || !metrics_os) {
        err << "i/o error: writing into '" << opts.out.string() << "' failed\n";
        return kExitIo;
    }
    for (const auto& [name, m] : rows)
        out << name << ": EE " << m.avg_ee_bits_per_joule << " bit/J, throughput " << m.throughput_bps
            << " bit/s, reconfigurations " << m.reconfig_count << ", NACK rate " << m.nack_rate << "\n";
    return kExitOk;
}

int cmd_sweep(const CliOptions& opts, std::ostream& out, std::ostream& err)
{
    ExperimentSpec spec;
    if (auto rc = resolve_experiment(opts, spec, err))
        return *rc;
    std::vector<SeriesRow> rows;
    try {
        if (spec.kind == ExperimentKind::Shannon) {
            if (spec.shannon_powers_dbm.empty())
                throw std::invalid_argument("no power values for the analytic curve");
            spec.scenario.validate();
            rows = series_rows(shannon_curve(spec), spec.scenario.link.bandwidth_hz);
        } else if (spec.kind == ExperimentKind::Sweep) {
            rows = series_rows(spec.sweep.variable, sweep(spec.scenario, spec.sweep));
        } else {
            err << "error: experiment '" << spec.name << "' has no sweep block\n";
            return kExitInvalid;
        }
    } catch (const std::invalid_argument& e) {
        err << "invalid scenario: " << e.what() << "\n";
        return kExitInvalid;
    }
    std::ofstream os;
    if (auto rc = open_output(opts.out / "series.csv", os, err))
        return *rc;
    write_series_csv(os, rows);
    os.flush();
    if (!os) {
        err << "i/o error: writing series.csv failed\n";
        return kExitIo;
    }
    out << "wrote " << rows.size() << " rows to " << (opts.out / "series.csv").string() << "\n";
    return kExitOk;
}

int cmd_tablegen(double step_db, int entries, const std::filesystem::path& out_path, std::ostream& out,
                 std::ostream& err)
{
    std::string csv;
    try {
        csv = table_to_csv(default_table(step_db, entries),
                           "synthetic table: thresholds in steps of " + format_double(step_db) + " dB");
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    std::ofstream os;
    if (auto rc = open_output(out_path, os, err))
        return *rc;
    os << csv;
    os.flush();
    if (!os) {
        err << "i/o error: writing '" << out_path.string() << "' failed\n";
        return kExitIo;
    }
    out << "wrote " << entries << " entries to " << out_path.string() << "\n";
    return kExitOk;
}

}  // namespace hsdpa_ee
