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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>
#include <pybind11/pybind11.h>

#include <memory>

namespace py = pybind11;
using namespace hsdpa_ee;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Energy-efficient power control and link adaptation for HSDPA";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<TableError>(m, "TableError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<PowerModelParams>(m, "PowerModelParams")
        .def(py::init<>())
        .def_readwrite("eta", &PowerModelParams::eta)
        .def_readwrite("p_cir_w", &PowerModelParams::p_cir_w)
        .def_readwrite("p_sta_w", &PowerModelParams::p_sta_w)
        .def_readwrite("active_antennas", &PowerModelParams::active_antennas)
        .def("validate", &PowerModelParams::validate)
        .def("idle_power_w", &PowerModelParams::idle_power_w);

    m.def("dbm_to_watt", &dbm_to_watt, py::arg("p_dbm"));
    m.def("watt_to_dbm", &watt_to_dbm, py::arg("p_w"));
    m.def("total_power", &total_power, py::arg("p_tx_w"), py::arg("params") = PowerModelParams{});
    m.def("shannon_se", &shannon_se, py::arg("p_tx_w"), py::arg("n0_w_per_hz"), py::arg("bandwidth_hz"));
    m.def("shannon_ee", &shannon_ee, py::arg("p_tx_w"), py::arg("n0_w_per_hz"), py::arg("bandwidth_hz"),
          py::arg("params") = PowerModelParams{});
    m.def("optimal_shannon_power", &optimal_shannon_power, py::arg("params"), py::arg("n0_w_per_hz"),
          py::arg("bandwidth_hz"), py::arg("p_max_w"), py::arg("tolerance_w") = 1e-6);

    py::class_<McsEntry>(m, "McsEntry")
        .def(py::init<>())
        .def_readwrite("cqi", &McsEntry::cqi)
        .def_readwrite("sinr_threshold_db", &McsEntry::sinr_threshold_db)
        .def_readwrite("tbs_bits", &McsEntry::tbs_bits)
        .def_readwrite("modulation_order", &McsEntry::modulation_order)
        .def_readwrite("num_codes", &McsEntry::num_codes);

    py::class_<McsTable>(m, "McsTable")
        .def(py::init<std::vector<McsEntry>, double>(), py::arg("entries"), py::arg("ber_target") = 0.1)
        .def("__len__", &McsTable::size)
        .def_property_readonly("max_cqi", &McsTable::max_cqi)
        .def("threshold_db", &McsTable::threshold_db, py::arg("cqi"))
        .def("tbs_bits", &McsTable::tbs_bits, py::arg("cqi"))
        .def("entries", [](const McsTable& t) { return std::vector<McsEntry>(t.entries().begin(), t.entries().end()); })
        .def("to_csv", [](const McsTable& t) { return table_to_csv(t); });

    m.def("default_table", &default_table, py::arg("step_db") = 1.0, py::arg("entries") = 30);
    m.def("load_table", [](const std::string& csv) { return load_table(csv); }, py::arg("csv"));
    m.def("load_table_file", [](const std::filesystem::path& p) { return load_table_file(p); }, py::arg("path"));
    m.def("cqi_from_sinr", &cqi_from_sinr, py::arg("sinr_db"), py::arg("table"));

    py::class_<ControllerConfig>(m, "ControllerConfig")
        .def(py::init<>())
        .def_readwrite("p_max_dbm", &ControllerConfig::p_max_dbm)
        .def_readwrite("theta_min", &ControllerConfig::theta_min)
        .def_readwrite("delta_threshold", &ControllerConfig::delta_threshold)
        .def_readwrite("gamma_prohibit_ms", &ControllerConfig::gamma_prohibit_ms)
        .def_readwrite("gamma_periodic_ms", &ControllerConfig::gamma_periodic_ms)
        .def_readwrite("tti_ms", &ControllerConfig::tti_ms)
        .def_readwrite("bler_target", &ControllerConfig::bler_target)
        .def_readwrite("offset_step_down_db", &ControllerConfig::offset_step_down_db)
        .def_readwrite("offset_step_up_db", &ControllerConfig::offset_step_up_db)
        .def_readwrite("offset_clamp_db", &ControllerConfig::offset_clamp_db)
        .def_readwrite("ee_smoothing", &ControllerConfig::ee_smoothing)
        .def("validate", &ControllerConfig::validate)
        .def("set_offset_steps", &ControllerConfig::set_offset_steps, py::arg("step_down_db"));

    py::class_<Selection>(m, "Selection")
        .def_readonly("theta", &Selection::theta)
        .def_readonly("power_dbm", &Selection::power_dbm)
        .def_readonly("ee", &Selection::ee)
        .def_readonly("best_index", &Selection::best_index)
        .def_readonly("best_power_dbm", &Selection::best_power_dbm)
        .def_readonly("theta_max", &Selection::theta_max)
        .def_readonly("p_min_dbm", &Selection::p_min_dbm)
        .def_readonly("feasible", &Selection::feasible);

    m.def("estimate_ee", &estimate_ee, py::arg("p_dbm"), py::arg("tbs_bits"), py::arg("params"),
          py::arg("tti_ms") = 2.0);
    m.def("select_optimal", &select_optimal, py::arg("p_dbm"), py::arg("feedback_cqi"), py::arg("delta_db"),
          py::arg("table"), py::arg("config") = ControllerConfig{}, py::arg("params") = PowerModelParams{});

    m.def("pci_codebook", [] {
        std::vector<Eigen::Matrix2cd> out;
        for (const auto& w : pci_codebook())
            out.push_back(w.matrix());
        return out;
    }, "Precoding matrices [[w1, w3], [w2, w4]] for PCI 0..3.");

    py::enum_<AntennaMode>(m, "AntennaMode")
        .value("SISO", AntennaMode::Siso)
        .value("SIMO", AntennaMode::Simo)
        .value("MIMO", AntennaMode::Mimo);
    py::enum_<Strategy>(m, "Strategy")
        .value("FIXED_BASELINE", Strategy::FixedBaseline)
        .value("PER_TTI_OPTIMAL", Strategy::PerTtiOptimal)
        .value("SEMI_STATIC", Strategy::SemiStatic);
    py::enum_<SweepVariable>(m, "SweepVariable")
        .value("SPEED", SweepVariable::Speed)
        .value("DISTANCE", SweepVariable::Distance)
        .value("THETA_MIN", SweepVariable::ThetaMin)
        .value("FIXED_POWER", SweepVariable::FixedPower)
        .value("ANTENNA_MODE", SweepVariable::AntennaMode);
    py::enum_<TtiOutcome>(m, "TtiOutcome")
        .value("IDLE", TtiOutcome::Idle)
        .value("ACK", TtiOutcome::Ack)
        .value("NACK", TtiOutcome::Nack);

    py::class_<LinkBudget>(m, "LinkBudget")
        .def(py::init<>())
        .def_readwrite("distance_m", &LinkBudget::distance_m)
        .def_readwrite("speed_kmh", &LinkBudget::speed_kmh)
        .def_readwrite("carrier_hz", &LinkBudget::carrier_hz)
        .def_readwrite("bandwidth_hz", &LinkBudget::bandwidth_hz)
        .def_readwrite("sf", &LinkBudget::sf)
        .def_readwrite("alpha", &LinkBudget::alpha)
        .def_readwrite("cell_power_dbm", &LinkBudget::cell_power_dbm)
        .def_readwrite("geometry_db", &LinkBudget::geometry_db)
        .def_readwrite("geometry_ref_distance_m", &LinkBudget::geometry_ref_distance_m)
        .def_readwrite("noise_figure_db", &LinkBudget::noise_figure_db)
        .def_readwrite("sinusoids", &LinkBudget::sinusoids);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("antenna_mode", &ScenarioConfig::antenna_mode)
        .def_readwrite("strategy", &ScenarioConfig::strategy)
        .def_readwrite("duration_ttis", &ScenarioConfig::duration_ttis)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("link", &ScenarioConfig::link)
        .def_readwrite("controller", &ScenarioConfig::controller)
        .def_readwrite("power_model", &ScenarioConfig::power_model)
        .def_readwrite("feedback_delay_ttis", &ScenarioConfig::feedback_delay_ttis)
        .def_readwrite("baseline_power_dbm", &ScenarioConfig::baseline_power_dbm)
        .def_readwrite("decode_margin_db", &ScenarioConfig::decode_margin_db)
        .def_readwrite("max_retransmissions", &ScenarioConfig::max_retransmissions)
        .def_readwrite("soft_combining", &ScenarioConfig::soft_combining)
        .def_property(
            "table", [](const ScenarioConfig& s) { return s.mcs_table(); },
            [](ScenarioConfig& s, const McsTable& t) { s.table = std::make_shared<const McsTable>(t); })
        .def("validate", &ScenarioConfig::validate);

    py::class_<TtiRecord>(m, "TtiRecord")
        .def_readonly("tti", &TtiRecord::tti)
        .def_readonly("p_tx_dbm", &TtiRecord::p_tx_dbm)
        .def_readonly("mcs", &TtiRecord::mcs)
        .def_readonly("mcs2", &TtiRecord::mcs2)
        .def_readonly("outcome", &TtiRecord::outcome)
        .def_readonly("outcome2", &TtiRecord::outcome2)
        .def_readonly("sinr_db", &TtiRecord::sinr_db)
        .def_readonly("delivered_bits", &TtiRecord::delivered_bits)
        .def_readonly("energy_j", &TtiRecord::energy_j)
        .def_readonly("delta_db", &TtiRecord::delta_db)
        .def_readonly("reconfigured", &TtiRecord::reconfigured)
        .def_readonly("retransmission", &TtiRecord::retransmission);

    py::class_<RunMetrics>(m, "RunMetrics")
        .def_readonly("avg_ee_bits_per_joule", &RunMetrics::avg_ee_bits_per_joule)
        .def_readonly("throughput_bps", &RunMetrics::throughput_bps)
        .def_readonly("reconfig_count", &RunMetrics::reconfig_count)
        .def_readonly("nack_rate", &RunMetrics::nack_rate)
        .def_readonly("nack_rate_all", &RunMetrics::nack_rate_all)
        .def_readonly("total_bits", &RunMetrics::total_bits)
        .def_readonly("total_energy_j", &RunMetrics::total_energy_j)
        .def_readonly("mean_power_dbm", &RunMetrics::mean_power_dbm);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("metrics", &RunResult::metrics)
        .def_readonly("trace", &RunResult::trace);

    m.def("run", &run, py::arg("scenario"), py::arg("keep_trace") = true,
          py::call_guard<py::gil_scoped_release>());

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("variable", &SweepSpec::variable)
        .def_readwrite("values", &SweepSpec::values)
        .def_readwrite("repetitions", &SweepSpec::repetitions)
        .def_readwrite("strategies", &SweepSpec::strategies)
        .def_readwrite("modes", &SweepSpec::modes);

    py::class_<SeriesPoint>(m, "SeriesPoint")
        .def_readonly("value", &SeriesPoint::value)
        .def_readonly("strategy", &SeriesPoint::strategy)
        .def_readonly("mode", &SeriesPoint::mode)
        .def_readonly("label", &SeriesPoint::label)
        .def_readonly("reps", &SeriesPoint::reps)
        .def_readonly("mean_ee", &SeriesPoint::mean_ee)
        .def_readonly("std_ee", &SeriesPoint::std_ee)
        .def_readonly("mean_reconfigs", &SeriesPoint::mean_reconfigs)
        .def_readonly("mean_throughput", &SeriesPoint::mean_throughput);

    m.def("sweep", &sweep, py::arg("scenario"), py::arg("spec"), py::call_guard<py::gil_scoped_release>());

    py::enum_<ExperimentKind>(m, "ExperimentKind")
        .value("RUN", ExperimentKind::Run)
        .value("SWEEP", ExperimentKind::Sweep)
        .value("SHANNON", ExperimentKind::Shannon);

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def_readwrite("name", &ExperimentSpec::name)
        .def_readwrite("kind", &ExperimentSpec::kind)
        .def_readwrite("scenario", &ExperimentSpec::scenario)
        .def_readwrite("run_strategies", &ExperimentSpec::run_strategies)
        .def_readwrite("sweep", &ExperimentSpec::sweep)
        .def_readwrite("shannon_powers_dbm", &ExperimentSpec::shannon_powers_dbm);

    py::class_<ShannonPoint>(m, "ShannonPoint")
        .def_readonly("power_dbm", &ShannonPoint::power_dbm)
        .def_readonly("se", &ShannonPoint::se)
        .def_readonly("ee", &ShannonPoint::ee);

    m.def("preset_names", &preset_names);
    m.def("preset", [](const std::string& name) { return preset(name); }, py::arg("name"));
    m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("shannon_curve", &shannon_curve, py::arg("spec"));
}
