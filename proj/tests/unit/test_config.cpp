#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tcamsim/config.hpp"
#include "tcamsim/errors.hpp"
#include "tcamsim/report_io.hpp"

using namespace tcamsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "tcamsim_config_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("run config with units") {
    const auto p = scratch("run.toml", R"(
seed = 9
technologies = ["nem3t2n", "fefet2f"]

[array]
rows = 32
cols = 16
v_sense = "400mV"

[devices.nem3t2n.relay]
v_pi = "0.55V"
tau_mech = "3ns"

[devices.fefet2f]
r_channel_on = "60kOhm"

[parasitics.sram16t]
c_ml_per_cell = "100aF"

[refresh]
policy = "row-by-row"
period = "5us"

[trace]
path = "trace.txt"
horizon = "100us"

[output]
format = "json"
)");
    const RunConfig cfg = load_run_config(p);
    CHECK(cfg.seed == 9);
    REQUIRE(cfg.technologies.size() == 2);
    CHECK(cfg.technologies[1] == CellKind::Fefet2F);
    CHECK(cfg.inputs.rows == 32);
    CHECK(cfg.inputs.v_sense == doctest::Approx(0.4));
    const auto& nem = std::get<Nem3T2NParams>(cfg.inputs.techs[CellKind::Nem3T2N].params);
    CHECK(nem.relay.v_pi == doctest::Approx(0.55));
    CHECK(nem.relay.tau_mech == doctest::Approx(3e-9));
    CHECK(nem.relay.v_po == doctest::Approx(0.13));
    CHECK(std::get<Fefet2FParams>(cfg.inputs.techs[CellKind::Fefet2F].params).r_channel_on == doctest::Approx(60e3));
    CHECK(*cfg.parasitic_overrides[CellKind::Sram16T].c_ml_per_cell == doctest::Approx(100e-18));
    CHECK(cfg.policy == PolicyKind::RowByRow);
    CHECK(*cfg.refresh_period == doctest::Approx(5e-6));
    CHECK(cfg.trace_path->filename() == "trace.txt");
    CHECK(cfg.trace_path->parent_path() == p.parent_path());
    CHECK(*cfg.trace_horizon == doctest::Approx(100e-6));
    CHECK(cfg.format == "json");

    const Calibration cal = resolve_calibration(cfg);
    CHECK(cal.configs[CellKind::Sram16T].parasitics.c_ml_per_cell == doctest::Approx(100e-18));
    CHECK(std::holds_alternative<RowByRow>(resolve_policy(cfg, cal.relay())));
}

TEST_CASE("unitless physical quantities are rejected") {
    CHECK_THROWS_AS(load_run_config(scratch("bad1.toml", "[array]\nvdd = 1.0\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(scratch("bad2.toml", "[devices.nem3t2n.relay]\nc_on = \"20\"\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(scratch("bad3.toml", "[devices.nem3t2n.relay]\nc_on = \"20ns\"\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(scratch("bad4.toml", "technologies = [\"mtj\"]\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(scratch("bad5.toml", "[refresh]\npolicy = \"sometimes\"\n")), ConfigError);
    CHECK_THROWS_AS(load_run_config(scratch("bad6.toml", "[array\n")), ParseError);
    CHECK_THROWS_AS(load_run_config(scratch("bad7.toml", "[array]\nrows = -3\n")), ConfigError);
}

TEST_CASE("targets file") {
    const auto p = scratch("targets.toml", R"(
[targets]
osr_energy = "0.6pJ"
[targets.write_energy]
sram16t = "0.35pJ"
[targets.search_latency_ratio]
fefet2f = 3.0
)");
    const CalibrationTargets t = load_targets(p);
    CHECK(t.osr_energy == doctest::Approx(0.6e-12));
    CHECK(t.write_energy[CellKind::Sram16T] == doctest::Approx(0.35e-12));
    CHECK(t.write_energy[CellKind::Rram2T2R] == doctest::Approx(46e-12));
    CHECK(t.search_latency_ratio[CellKind::Fefet2F] == 3.0);

    const auto flat = scratch("flat.toml", "retention = \"30us\"\n");
    CHECK(load_targets(flat).retention == doctest::Approx(30e-6));
}

TEST_CASE("calibration file round trip is exact") {
    const Calibration cal = calibrate({});
    const std::string text = calibration_to_toml(cal);
    const Calibration back = calibration_from_toml(text);
    CHECK(calibration_to_toml(back) == text);
    CHECK(back.i_leak == cal.i_leak);
    for (CellKind k : kAllCellKinds) {
        CHECK(back.configs[k].parasitics.c_ml_per_cell == cal.configs[k].parasitics.c_ml_per_cell);
        CHECK(back.switching_cells[k] == cal.switching_cells[k]);
    }
    CHECK(report_to_csv(run_all_benches(back, 1)) == report_to_csv(run_all_benches(cal, 1)));
    CHECK_THROWS_AS(calibration_from_toml("[targets]\n"), ConfigError);
}

TEST_CASE("report formats carry the same rows") {
    BenchReport r;
    r.rows.push_back({"write_energy", "sram16t", 8.1e-13, "J", 2.3142857, 8.1e-13, 0.05, true});
    r.rows.push_back({"write_latency_order", "all", 1.0, "bool", std::nullopt, std::nullopt, std::nullopt, false});
    const std::string csv = report_to_csv(r);
    CHECK(csv ==
          "metric,technology,absolute_value,unit,ratio_vs_3t2n,paper_target,tolerance,pass\n"
          "write_energy,sram16t,8.1e-13,J,2.3142857,8.1e-13,0.05,true\n"
          "write_latency_order,all,1,bool,,,,false\n");
    const std::string json = report_to_json(r);
    CHECK(json.find("\"ratio_vs_3t2n\": 2.3142857") != std::string::npos);
    CHECK(json.find("\"paper_target\": null") != std::string::npos);
    CHECK(format_report(r, "csv") == csv);
    CHECK_THROWS_AS(format_report(r, "xml"), ArgumentError);
}
