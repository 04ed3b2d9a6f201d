#include <sstream>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tcamsim/bench.hpp"
#include "tcamsim/errors.hpp"
#include "tcamsim/refresh.hpp"
#include "tcamsim/report_io.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace tcamsim;

namespace {

// PerTech<double> <-> {"nem3t2n": ..., ...}
py::dict per_tech_to_dict(const PerTech<double>& v) {
    py::dict d;
    for (CellKind k : kAllCellKinds) d[py::str(std::string(cell_kind_id(k)))] = v[k];
    return d;
}

void per_tech_from_dict(PerTech<double>& v, const py::dict& d) {
    for (auto [key, value] : d) {
        const auto kind = cell_kind_from_id(key.cast<std::string>());
        if (!kind) throw ArgumentError("unknown technology '" + key.cast<std::string>() + "'");
        v[*kind] = value.cast<double>();
    }
}

template <class Cls>
void per_tech_property(Cls& cls, const char* name, PerTech<double> CalibrationTargets::*field) {
    cls.def_property(
        name, [field](const CalibrationTargets& t) { return per_tech_to_dict(t.*field); },
        [field](CalibrationTargets& t, const py::dict& d) { per_tech_from_dict(t.*field, d); });
}

WorkloadTrace trace_from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_trace(in);
}

py::dict report_dict(const EnergyLatencyReport& r) {
    py::dict breakdown;
    for (const auto& c : r.breakdown) breakdown[py::str(c.line)] = c.energy;
    return py::dict("energy"_a = r.energy, "latency"_a = r.latency, "edp"_a = r.edp(), "breakdown"_a = breakdown);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "tcamsim core bindings";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<CorruptedStateError>(m, "CorruptedStateError", base.ptr());
    py::register_exception<PolicyError>(m, "PolicyError", base.ptr());
    py::register_exception<NotApplicableError>(m, "NotApplicableError", base.ptr());
    py::register_exception<CalibrationError>(m, "CalibrationError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());

    py::enum_<TernaryValue>(m, "TernaryValue")
        .value("Zero", TernaryValue::Zero)
        .value("One", TernaryValue::One)
        .value("DontCare", TernaryValue::DontCare);

    py::enum_<CellKind>(m, "CellKind")
        .value("Nem3T2N", CellKind::Nem3T2N)
        .value("Sram16T", CellKind::Sram16T)
        .value("Rram2T2R", CellKind::Rram2T2R)
        .value("Fefet2F", CellKind::Fefet2F)
        .def_property_readonly("id", [](CellKind k) { return std::string(cell_kind_id(k)); });

    py::enum_<RelayPosition>(m, "RelayPosition")
        .value("Open", RelayPosition::Open)
        .value("Closed", RelayPosition::Closed);

    py::class_<RelayParams>(m, "RelayParams")
        .def(py::init<>())
        .def_readwrite("v_pi", &RelayParams::v_pi)
        .def_readwrite("v_po", &RelayParams::v_po)
        .def_readwrite("c_on", &RelayParams::c_on)
        .def_readwrite("c_off", &RelayParams::c_off)
        .def_readwrite("r_on", &RelayParams::r_on)
        .def_readwrite("tau_mech", &RelayParams::tau_mech)
        .def_readwrite("i_leak", &RelayParams::i_leak);

    py::class_<RelayState>(m, "RelayState")
        .def(py::init<>())
        .def(py::init([](RelayPosition p, double v, double pending) { return RelayState{p, v, pending}; }),
             "position"_a, "v_gb"_a = 0.0, "pending"_a = 0.0)
        .def_readwrite("position", &RelayState::position)
        .def_readwrite("v_gb", &RelayState::v_gb)
        .def_readwrite("pending", &RelayState::pending)
        .def_property_readonly("closed", &RelayState::closed)
        .def(py::self == py::self)
        .def("__repr__", [](const RelayState& s) {
            return "RelayState(" + std::string(s.closed() ? "Closed" : "Open") + ", v_gb=" + std::to_string(s.v_gb) + ")";
        });

    m.def("relay_apply_bias", &relay_apply_bias, "state"_a, "params"_a, "v_gb"_a, "duration"_a,
          "vdd_max"_a = kDefaultVddMax);
    m.def(
        "relay_leak_decay",
        [](const RelayState& s, const RelayParams& p, double dt) {
            const RelayDecay d = relay_leak_decay(s, p, dt);
            return py::make_tuple(d.state, d.pulled_out);
        },
        "state"_a, "params"_a, "dt"_a, "Returns (state, pulled_out).");
    m.def("relay_retention_time", &relay_retention_time, "params"_a, "v_start"_a);

    py::class_<TernaryWord>(m, "TernaryWord")
        .def(py::init(&TernaryWord::parse), "text"_a)
        .def_static("parse", &TernaryWord::parse)
        .def("__len__", &TernaryWord::size)
        .def("__getitem__",
             [](const TernaryWord& w, std::size_t i) {
                 if (i >= w.size()) throw py::index_error();
                 return w[i];
             })
        .def("__str__", &TernaryWord::to_string)
        .def("__repr__", [](const TernaryWord& w) { return "TernaryWord('" + w.to_string() + "')"; })
        .def_property_readonly("definite", &TernaryWord::definite)
        .def(py::self == py::self);
    py::implicitly_convertible<std::string, TernaryWord>();

    py::class_<ArrayConfig>(m, "ArrayConfig")
        .def_static("defaults", &ArrayConfig::defaults, "kind"_a, "rows"_a = 64, "cols"_a = 64)
        .def_readwrite("rows", &ArrayConfig::rows)
        .def_readwrite("cols", &ArrayConfig::cols)
        .def_readwrite("vdd", &ArrayConfig::vdd)
        .def_readwrite("v_sense", &ArrayConfig::v_sense)
        .def_readwrite("write_supply", &ArrayConfig::write_supply)
        .def_readwrite("write_driver_r", &ArrayConfig::write_driver_r)
        .def_property_readonly("kind", [](const ArrayConfig& c) { return c.tech.kind(); })
        .def_property_readonly("c_ml_per_cell", [](const ArrayConfig& c) { return c.parasitics.c_ml_per_cell; })
        .def_property_readonly("c_bl_per_cell", [](const ArrayConfig& c) { return c.parasitics.c_bl_per_cell; })
        .def_property_readonly("c_sl_per_cell", [](const ArrayConfig& c) { return c.parasitics.c_sl_per_cell; })
        .def_property_readonly("c_wl_per_cell", [](const ArrayConfig& c) { return c.parasitics.c_wl_per_cell; })
        .def("validate", &ArrayConfig::validate);

    py::class_<TcamArray>(m, "TcamArray")
        .def(py::init<ArrayConfig>(), "config"_a)
        .def_property_readonly("config", &TcamArray::config)
        .def_property_readonly("rows", &TcamArray::rows)
        .def_property_readonly("cols", &TcamArray::cols)
        .def_property_readonly("matchlines",
                               [](const TcamArray& a) { return std::vector<double>(a.matchlines().begin(), a.matchlines().end()); })
        .def("decode_row", &TcamArray::decode_row, "row"_a)
        .def("export_contents", [](const TcamArray& a) { return export_contents(a); })
        .def_static(
            "import_contents",
            [](const std::string& text, const ArrayConfig& base) {
                std::istringstream in(text);
                return import_contents(in, base);
            },
            "text"_a, "base"_a);

    m.def("new_array", &new_array, "config"_a);
    m.def(
        "write_row",
        [](const TcamArray& a, std::size_t row, const TernaryWord& w) {
            RowWrite out = write_row(a, row, w);
            py::dict info = report_dict(out.report);
            info["devices_switched"] = out.devices_switched;
            return py::make_tuple(std::move(out.array), info);
        },
        "array"_a, "row"_a, "word"_a, "Returns (array, report).");
    m.def("search_functional", &search_functional, "array"_a, "key"_a);
    m.def(
        "search_timed",
        [](const TcamArray& a, const TernaryWord& key) {
            const TimedSearch s = search_timed(a, key);
            py::dict info = report_dict(s.report);
            info["matches"] = s.matches;
            info["mismatch_counts"] = s.mismatch_counts;
            info["settle_times"] = s.settle_times;
            return info;
        },
        "array"_a, "key"_a);
    m.def(
        "precharge",
        [](const TcamArray& a) {
            Precharge p = precharge(a);
            return py::make_tuple(std::move(p.array), p.energy);
        },
        "array"_a, "Returns (array, energy).");
    m.def(
        "elapse",
        [](const TcamArray& a, double dt) {
            Elapse e = elapse(a, dt);
            py::list losses;
            for (const auto& l : e.losses) losses.append(py::make_tuple(l.row, l.col, l.device));
            return py::make_tuple(std::move(e.array), losses);
        },
        "array"_a, "dt"_a, "Returns (array, [(row, col, device), ...]).");

    py::class_<NoRefresh>(m, "NoRefresh").def(py::init<>());
    py::class_<RowByRow>(m, "RowByRow")
        .def(py::init([](double period) { return RowByRow{period}; }), "period"_a)
        .def_readwrite("period", &RowByRow::period);
    py::class_<OneShot>(m, "OneShot")
        .def(py::init([](double v_r, double period) { return OneShot{v_r, period}; }), "v_r"_a, "period"_a)
        .def_readwrite("v_r", &OneShot::v_r)
        .def_readwrite("period", &OneShot::period);

    auto refresh_tuple = [](RefreshOutcome o) {
        return py::make_tuple(std::move(o.array), py::dict("energy"_a = o.energy, "latency"_a = o.latency, "ops"_a = o.ops));
    };
    m.def(
        "one_shot_refresh", [refresh_tuple](const TcamArray& a, double v_r) { return refresh_tuple(one_shot_refresh(a, v_r)); },
        "array"_a, "v_r"_a);
    m.def(
        "row_by_row_refresh", [refresh_tuple](const TcamArray& a) { return refresh_tuple(row_by_row_refresh(a)); }, "array"_a);
    m.def("min_safe_period", &min_safe_period, "params"_a, "policy"_a, "safety_factor"_a = kDefaultSafetyFactor);
    m.def("refresh_average_power", &refresh_average_power, "energy"_a, "period"_a);

    py::class_<WorkloadTrace>(m, "WorkloadTrace")
        .def("__len__", [](const WorkloadTrace& t) { return t.requests.size(); })
        .def("__str__", &format_trace);
    m.def("parse_trace", &trace_from_text, "text"_a);

    py::class_<RefreshStats>(m, "RefreshStats")
        .def_readonly("refresh_ops", &RefreshStats::refresh_ops)
        .def_readonly("refresh_energy", &RefreshStats::refresh_energy)
        .def_readonly("average_power", &RefreshStats::average_power)
        .def_readonly("requests", &RefreshStats::requests)
        .def_readonly("stalled_requests", &RefreshStats::stalled_requests)
        .def_readonly("total_stall_time", &RefreshStats::total_stall_time)
        .def_readonly("data_loss_events", &RefreshStats::data_loss_events)
        .def_readonly("horizon", &RefreshStats::horizon);
    m.def("simulate_workload", &simulate_workload, "array"_a, "trace"_a, "policy"_a, "horizon"_a = py::none());

    py::class_<CalibrationTargets> targets(m, "CalibrationTargets");
    targets.def(py::init<>())
        .def_readwrite("osr_energy", &CalibrationTargets::osr_energy)
        .def_readwrite("retention", &CalibrationTargets::retention)
        .def_readwrite("refresh_power", &CalibrationTargets::refresh_power)
        .def("validate", &CalibrationTargets::validate);
    per_tech_property(targets, "write_energy", &CalibrationTargets::write_energy);
    per_tech_property(targets, "write_latency", &CalibrationTargets::write_latency);
    per_tech_property(targets, "write_efficiency_ratio", &CalibrationTargets::write_efficiency_ratio);
    per_tech_property(targets, "search_latency_ratio", &CalibrationTargets::search_latency_ratio);
    per_tech_property(targets, "search_energy_ratio", &CalibrationTargets::search_energy_ratio);
    per_tech_property(targets, "search_edp_ratio", &CalibrationTargets::search_edp_ratio);

    py::class_<Calibration>(m, "Calibration")
        .def_readonly("targets", &Calibration::targets)
        .def_readonly("v_r", &Calibration::v_r)
        .def_readonly("i_leak", &Calibration::i_leak)
        .def_readonly("wl_to_bl_ratio", &Calibration::wl_to_bl_ratio)
        .def_readonly("write_driver_r", &Calibration::write_driver_r)
        .def_property_readonly("relay", &Calibration::relay)
        .def("retention", &Calibration::retention)
        .def("config", [](const Calibration& c, CellKind k) { return c.configs[k]; }, "kind"_a)
        .def("switching_cells", [](const Calibration& c, CellKind k) { return c.switching_cells[k]; }, "kind"_a);
    m.def(
        "calibrate", [](const std::optional<CalibrationTargets>& t) { return calibrate(t.value_or(CalibrationTargets{})); },
        "targets"_a = py::none());

    py::class_<BenchRow>(m, "BenchRow")
        .def_readonly("metric", &BenchRow::metric)
        .def_readonly("technology", &BenchRow::technology)
        .def_readonly("absolute_value", &BenchRow::absolute_value)
        .def_readonly("unit", &BenchRow::unit)
        .def_readonly("ratio_vs_3t2n", &BenchRow::ratio_vs_3t2n)
        .def_readonly("paper_target", &BenchRow::paper_target)
        .def_readonly("tolerance", &BenchRow::tolerance)
        .def_readonly("passed", &BenchRow::pass)
        .def("__repr__", [](const BenchRow& r) {
            return "BenchRow(" + r.metric + ", " + r.technology + ", " + std::to_string(r.absolute_value) + ")";
        });
    py::class_<BenchReport>(m, "BenchReport")
        .def_readonly("rows", &BenchReport::rows)
        .def("all_pass", &BenchReport::all_pass)
        .def("failures", &BenchReport::failures)
        .def("find", &BenchReport::find, "metric"_a, "technology"_a)
        .def("filtered", &BenchReport::filtered, "technology"_a)
        .def("__len__", [](const BenchReport& r) { return r.rows.size(); });
    m.def("run_write_bench", &run_write_bench, "calibration"_a, "seed"_a = 1);
    m.def("run_search_bench", &run_search_bench, "calibration"_a, "seed"_a = 1);
    m.def("run_refresh_bench", &run_refresh_bench, "calibration"_a, "seed"_a = 1);
    m.def("run_all_benches", &run_all_benches, "calibration"_a, "seed"_a = 1);
    m.def("report_to_csv", &report_to_csv, "report"_a);
    m.def("report_to_json", &report_to_json, "report"_a);
}
