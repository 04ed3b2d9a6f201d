#include "tcamsim/bench.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "tcamsim/errors.hpp"

namespace tcamsim {

namespace {

constexpr CellKind kReference = CellKind::Nem3T2N;

std::string target_name(const char* metric, CellKind k) { return fmt::format("{}.{}", metric, cell_kind_id(k)); }

void require_positive(double v, const std::string& name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw CalibrationError(name, fmt::format("must be positive and finite, got {}", v));
    }
}

bool within(double value, double target, double tolerance) {
    return std::abs(value - target) <= tolerance * std::abs(target);
}

TernaryWord random_word(std::size_t length, std::mt19937_64& rng) {
    std::vector<TernaryValue> symbols(length);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < length; ++i) {
        if (i % 64 == 0) bits = rng();
        symbols[i] = (bits >> (i % 64)) & 1U ? TernaryValue::One : TernaryValue::Zero;
    }
    return TernaryWord(std::move(symbols));
}

TcamArray random_array(const ArrayConfig& config, std::mt19937_64& rng) {
    TcamArray array(config);
    for (std::size_t r = 0; r < config.rows; ++r) array = write_row(std::move(array), r, random_word(config.cols, rng)).array;
    return array;
}

BenchRow make_row(std::string metric, CellKind kind, double value, std::string unit) {
    BenchRow row;
    row.metric = std::move(metric);
    row.technology = std::string(cell_kind_id(kind));
    row.absolute_value = value;
    row.unit = std::move(unit);
    return row;
}

void check_absolute(BenchRow& row, double target, double tolerance) {
    row.paper_target = target;
    row.tolerance = tolerance;
    row.pass = within(row.absolute_value, target, tolerance);
}

void check_ratio(BenchRow& row, double target, double tolerance) {
    row.paper_target = target;
    row.tolerance = tolerance;
    row.pass = row.ratio_vs_3t2n && within(*row.ratio_vs_3t2n, target, tolerance);
}

// Per-technology arithmetic the calibration inverts; kept in one place so the forward model
// used by the benches and the inverse solved here cannot drift apart.
struct WriteEnergyModel {
    double per_c_wl;  // J per farad of c_wl_per_cell
    double per_c_bl;  // J per farad of c_bl_per_cell
};

WriteEnergyModel write_energy_model(std::size_t rows, std::size_t cols, Volts vdd, Volts write_supply) {
    const double r = static_cast<double>(rows);
    const double c = static_cast<double>(cols);
    // One driven bitline per column for a definite word.
    return {c * vdd * vdd, c * r * write_supply * write_supply};
}

}  // namespace

void CalibrationTargets::validate() const {
    for (CellKind k : kAllCellKinds) {
        require_positive(write_energy[k], target_name("write_energy", k));
        require_positive(write_latency[k], target_name("write_latency", k));
        require_positive(write_efficiency_ratio[k], target_name("write_efficiency_ratio", k));
        require_positive(search_latency_ratio[k], target_name("search_latency_ratio", k));
        require_positive(search_energy_ratio[k], target_name("search_energy_ratio", k));
        require_positive(search_edp_ratio[k], target_name("search_edp_ratio", k));
        const double implied = search_latency_ratio[k] * search_energy_ratio[k];
        if (!within(implied, search_edp_ratio[k], kArithmeticTolerance)) {
            throw CalibrationError(target_name("search_edp_ratio", k),
                                   fmt::format("latency x energy ratio {} disagrees with EDP ratio {}", implied,
                                               search_edp_ratio[k]));
        }
    }
    require_positive(osr_energy, "osr_energy");
    require_positive(retention, "retention");
    require_positive(refresh_power, "refresh_power");
}

const RelayParams& Calibration::relay() const {
    return std::get<Nem3T2NParams>(configs[CellKind::Nem3T2N].tech.params).relay;
}

Seconds Calibration::retention() const { return relay_retention_time(relay(), configs[CellKind::Nem3T2N].vdd); }

Calibration calibrate(const CalibrationTargets& targets, const CalibrationInputs& inputs) {
    targets.validate();
    Calibration cal;
    cal.targets = targets;
    cal.v_r = inputs.v_r;
    const double rows = static_cast<double>(inputs.rows);
    const double cols = static_cast<double>(inputs.cols);
    const Volts vdd = inputs.vdd;

    for (CellKind k : kAllCellKinds) {
        if (inputs.techs[k].kind() != k) throw ConfigError("calibration inputs list technologies out of order");
        ArrayConfig cfg;
        cfg.rows = inputs.rows;
        cfg.cols = inputs.cols;
        cfg.vdd = vdd;
        cfg.v_sense = inputs.v_sense;
        cfg.tech = inputs.techs[k];
        cfg.write_supply = k == CellKind::Nem3T2N || k == CellKind::Sram16T ? vdd : default_write_supply(cfg.tech);
        cfg.tech.validate();
        cal.configs[k] = cfg;
    }

    // Gate leakage from retention: a closed gate written to vdd reaches v_po after `retention`.
    auto& nem = std::get<Nem3T2NParams>(cal.configs[kReference].tech.params);
    nem.relay.i_leak = nem.relay.c_on * (vdd - nem.relay.v_po) / targets.retention;
    cal.i_leak = nem.relay.i_leak;
    if (!(inputs.v_r > nem.relay.v_po && inputs.v_r < nem.relay.v_pi)) {
        throw CalibrationError("v_r", "refresh voltage outside the hysteresis window");
    }

    // 3T2N: row write   E_w   = a_wl c_wl + a_bl c_bl
    //       one-shot    E_osr = rows cols vdd^2 c_wl + 2 cols rows v_r^2 c_bl
    {
        ArrayConfig& cfg = cal.configs[kReference];
        const WriteEnergyModel w = write_energy_model(inputs.rows, inputs.cols, vdd, cfg.write_supply);
        const double o_wl = rows * cols * vdd * vdd;
        const double o_bl = 2.0 * cols * rows * inputs.v_r * inputs.v_r;
        const double det = w.per_c_wl * o_bl - w.per_c_bl * o_wl;
        if (det == 0.0) throw CalibrationError("osr_energy", "write and refresh energies are degenerate");
        const Joules e_w = targets.write_energy[kReference];
        const Joules e_o = targets.osr_energy;
        const Farads c_wl = (e_w * o_bl - w.per_c_bl * e_o) / det;
        const Farads c_bl = (w.per_c_wl * e_o - o_wl * e_w) / det;
        if (!(c_wl > 0.0)) throw CalibrationError("osr_energy", fmt::format("implies wordline capacitance {} F", c_wl));
        if (!(c_bl > 0.0)) {
            throw CalibrationError(target_name("write_energy", kReference),
                                   fmt::format("implies bitline capacitance {} F", c_bl));
        }
        cfg.parasitics = {c_bl, c_bl, c_bl, c_wl};
        cal.wl_to_bl_ratio = c_wl / c_bl;
        cal.switching_cells[kReference] = inputs.cols;
    }

    for (CellKind k : {CellKind::Sram16T, CellKind::Rram2T2R, CellKind::Fefet2F}) {
        ArrayConfig& cfg = cal.configs[k];
        Joules device = 0.0;
        cal.switching_cells[k] = inputs.cols;
        if (const auto* p = std::get_if<Rram2T2RParams>(&cfg.tech.params)) {
            const Joules per_set = resistive_write_energy(p->rram.v_set, p->rram.r_on, p->rram.t_write);
            const auto fit = static_cast<std::size_t>(std::floor(targets.write_energy[k] / per_set));
            cal.switching_cells[k] = std::min(inputs.cols, fit);
            device = static_cast<double>(cal.switching_cells[k]) * per_set;
        }
        const WriteEnergyModel w = write_energy_model(inputs.rows, inputs.cols, vdd, cfg.write_supply);
        const Farads c_bl = (targets.write_energy[k] - device) / (cal.wl_to_bl_ratio * w.per_c_wl + w.per_c_bl);
        if (c_bl < 0.0) {
            throw CalibrationError(target_name("write_energy", k), fmt::format("implies bitline capacitance {} F", c_bl));
        }
        cfg.parasitics.c_bl_per_cell = c_bl;
        cfg.parasitics.c_wl_per_cell = cal.wl_to_bl_ratio * c_bl;
    }

    // Write driver from the SRAM latency; write_cycle_time is affine in the driver resistance.
    {
        constexpr CellKind anchor = CellKind::Sram16T;
        ArrayConfig probe = cal.configs[anchor];
        probe.write_driver_r = 1.0;
        const Seconds t1 = write_cycle_time(probe);
        probe.write_driver_r = 2.0;
        const Seconds slope = write_cycle_time(probe) - t1;
        const Seconds fixed = t1 - slope;
        const Ohms r = (targets.write_latency[anchor] - fixed) / slope;
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw CalibrationError(target_name("write_latency", anchor), fmt::format("implies driver resistance {} Ohm", r));
        }
        cal.write_driver_r = r;
        for (CellKind k : kAllCellKinds) cal.configs[k].write_driver_r = r;
    }

    // Search. Worst case: every row discharges, one searchline per column is driven.
    const ArrayConfig& ref = cal.configs[kReference];
    const auto search_energy = [&](const LineParasitics& p, Joules sense) {
        return rows * line_switch_energy(cols * p.c_ml_per_cell, vdd) + cols * line_switch_energy(rows * p.c_sl_per_cell, vdd) +
               rows * sense;
    };
    const Joules e_ref = search_energy(ref.parasitics, ref.sense_energy_per_row);
    const Seconds t_ref =
        *matchline_settle_time(search_path(ref), cols * ref.parasitics.c_ml_per_cell, 1, vdd, ref.v_sense);
    for (CellKind k : {CellKind::Sram16T, CellKind::Rram2T2R, CellKind::Fefet2F}) {
        ArrayConfig& cfg = cal.configs[k];
        const Joules e = targets.search_energy_ratio[k] * e_ref - rows * cfg.sense_energy_per_row;
        const Farads c = e / (rows * cols * vdd * vdd * 2.0);
        if (!(c > 0.0)) {
            throw CalibrationError(target_name("search_energy_ratio", k), fmt::format("implies line capacitance {} F", c));
        }
        cfg.parasitics.c_ml_per_cell = c;
        cfg.parasitics.c_sl_per_cell = c;

        const Seconds per_ohm = *matchline_settle_time(DischargePath{{{1.0, 1.0}}}, cols * c, 1, vdd, cfg.v_sense);
        const Ohms r_total = targets.search_latency_ratio[k] * t_ref / per_ohm;
        const std::string name = target_name("search_latency_ratio", k);
        if (auto* p = std::get_if<Sram16TParams>(&cfg.tech.params)) {
            p->compare_stack.r_eff = r_total;
        } else if (auto* p = std::get_if<Rram2T2RParams>(&cfg.tech.params)) {
            p->access.r_eff = r_total - p->rram.r_on;
            if (!(p->access.r_eff > 0.0)) {
                throw CalibrationError(name, fmt::format("pull-down {} Ohm is below the RRAM on-resistance", r_total));
            }
        } else {
            std::get<Fefet2FParams>(cfg.tech.params).r_channel_on = r_total;
        }
        require_positive(r_total, name);
    }

    for (CellKind k : kAllCellKinds) cal.configs[k].validate();
    return cal;
}

bool BenchReport::all_pass() const noexcept {
    return std::all_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.pass; });
}

std::vector<BenchRow> BenchReport::failures() const {
    std::vector<BenchRow> out;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(out), [](const BenchRow& r) { return !r.pass; });
    return out;
}

std::optional<BenchRow> BenchReport::find(std::string_view metric, std::string_view technology) const {
    for (const auto& r : rows) {
        if (r.metric == metric && r.technology == technology) return r;
    }
    return std::nullopt;
}

void BenchReport::append(const BenchReport& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }

BenchReport BenchReport::filtered(std::string_view technology) const {
    BenchReport out;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(out.rows),
                 [&](const BenchRow& r) { return r.technology == technology || r.technology == "all"; });
    return out;
}

TernaryWord random_definite_word(std::size_t length, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_word(length, rng);
}

BenchReport run_write_bench(const Calibration& cal, std::uint64_t seed) {
    const CalibrationTargets& targets = cal.targets;
    std::mt19937_64 rng(seed);
    const TernaryWord word = random_word(cal.configs[kReference].cols, rng);

    PerTech<EnergyLatencyReport> measured;
    for (CellKind k : kAllCellKinds) {
        TernaryWord primed = word;
        for (std::size_t c = 0; c < std::min(cal.switching_cells[k], primed.size()); ++c) primed[c] = TernaryValue::DontCare;
        TcamArray array = write_row(TcamArray(cal.configs[k]), 0, primed).array;
        measured[k] = write_row(std::move(array), 0, word).report;
    }

    BenchReport report;
    const auto& ref = measured[kReference];
    for (CellKind k : kAllCellKinds) {
        BenchRow lat = make_row("write_latency", k, measured[k].latency, "s");
        lat.ratio_vs_3t2n = measured[k].latency / ref.latency;
        check_absolute(lat, targets.write_latency[k], kLatencyTolerance);
        report.rows.push_back(lat);
    }
    for (CellKind k : kAllCellKinds) {
        BenchRow e = make_row("write_energy", k, measured[k].energy, "J");
        e.ratio_vs_3t2n = measured[k].energy / ref.energy;
        check_absolute(e, targets.write_energy[k], kCalibratedTolerance);
        report.rows.push_back(e);
    }
    for (CellKind k : {CellKind::Sram16T, CellKind::Rram2T2R, CellKind::Fefet2F}) {
        BenchRow e = make_row("write_energy_ratio", k, measured[k].energy, "J");
        e.ratio_vs_3t2n = measured[k].energy / ref.energy;
        check_ratio(e, targets.write_efficiency_ratio[k], kCalibratedTolerance);
        report.rows.push_back(e);
    }
    BenchRow order;
    order.metric = "write_latency_order";
    order.technology = "all";
    order.unit = "bool";
    order.pass = measured[CellKind::Sram16T].latency < ref.latency &&
                 ref.latency < std::min(measured[CellKind::Rram2T2R].latency, measured[CellKind::Fefet2F].latency);
    order.absolute_value = order.pass ? 1.0 : 0.0;
    report.rows.push_back(order);
    return report;
}

BenchReport run_search_bench(const Calibration& cal, std::uint64_t seed) {
    const CalibrationTargets& targets = cal.targets;
    PerTech<EnergyLatencyReport> measured;
    for (CellKind k : kAllCellKinds) {
        std::mt19937_64 rng(seed);
        const TcamArray array = random_array(cal.configs[k], rng);
        TernaryWord key = array.decode_row(0);
        const std::size_t flip = rng() % key.size();
        key[flip] = key[flip] == TernaryValue::One ? TernaryValue::Zero : TernaryValue::One;
        measured[k] = search_timed(array, key).report;
    }

    BenchReport report;
    const auto& ref = measured[kReference];
    for (CellKind k : kAllCellKinds) {
        BenchRow lat = make_row("search_latency", k, measured[k].latency, "s");
        lat.ratio_vs_3t2n = measured[k].latency / ref.latency;
        BenchRow en = make_row("search_energy", k, measured[k].energy, "J");
        en.ratio_vs_3t2n = measured[k].energy / ref.energy;
        BenchRow d = make_row("search_edp", k, measured[k].edp(), "J*s");
        d.ratio_vs_3t2n = measured[k].edp() / ref.edp();
        if (k != kReference) {
            check_ratio(lat, targets.search_latency_ratio[k], kCalibratedTolerance);
            check_ratio(en, targets.search_energy_ratio[k], kCalibratedTolerance);
            check_ratio(d, targets.search_edp_ratio[k], kArithmeticTolerance);
        }
        report.rows.push_back(lat);
        report.rows.push_back(en);
        report.rows.push_back(d);

        if (k != kReference) {
            BenchRow identity = make_row("search_edp_identity", k, *d.ratio_vs_3t2n, "ratio");
            const double product = *lat.ratio_vs_3t2n * *en.ratio_vs_3t2n;
            identity.ratio_vs_3t2n = product;
            identity.tolerance = 1e-12;
            identity.pass = within(*d.ratio_vs_3t2n, product, 1e-12);
            report.rows.push_back(identity);
        }
    }
    return report;
}

BenchReport run_refresh_bench(const Calibration& cal, std::uint64_t seed) {
    const CalibrationTargets& targets = cal.targets;
    const ArrayConfig& cfg = cal.configs[kReference];
    std::mt19937_64 rng(seed);
    TcamArray array = random_array(cfg, rng);

    BenchReport report;
    auto add = [&](std::string metric, double value, std::string unit) -> BenchRow& {
        report.rows.push_back(make_row(std::move(metric), kReference, value, std::move(unit)));
        return report.rows.back();
    };

    const RefreshOutcome osr = one_shot_refresh(array, cal.v_r);
    check_absolute(add("osr_energy", osr.energy, "J"), targets.osr_energy, kCalibratedTolerance);
    add("osr_latency", osr.latency, "s");

    const Seconds retention = cal.retention();
    check_absolute(add("retention", retention, "s"), targets.retention, kRefreshTolerance);
    const Watts power = refresh_average_power(osr.energy, retention);
    check_absolute(add("refresh_power", power, "W"), targets.refresh_power, kArithmeticTolerance);

    const Seconds safe = min_safe_period(cal.relay(), OneShot{cal.v_r, retention});
    add("min_safe_period", safe, "s");
    add("refresh_power_safe_period", refresh_average_power(osr.energy, safe), "W");

    const TernaryWord word = random_word(cfg.cols, rng);
    const Joules row_write = write_row(array, 0, word).report.energy;
    BenchRow& bound = add("osr_vs_row_write", osr.energy, "J");
    bound.ratio_vs_3t2n = osr.energy / row_write;
    bound.paper_target = 2.0;
    bound.pass = osr.energy < 2.0 * row_write;

    // Uniform search traffic over a whole number of safe periods.
    constexpr std::size_t kPeriods = 4;
    constexpr std::size_t kSearchesPerPeriod = 512;
    WorkloadTrace trace;
    const Seconds spacing = safe / static_cast<double>(kSearchesPerPeriod);
    for (std::size_t i = 0; i < kPeriods * kSearchesPerPeriod; ++i) {
        trace.requests.push_back({static_cast<double>(i) * spacing, SearchRequest{random_word(cfg.cols, rng)}});
    }
    const Seconds horizon = static_cast<double>(kPeriods) * safe;
    const RefreshStats one_shot = simulate_workload(array, trace, OneShot{cal.v_r, safe}, horizon);
    const RefreshStats row_by_row = simulate_workload(array, trace, RowByRow{safe}, horizon);

    BenchRow& ops_osr = add("refresh_ops_per_period_one_shot",
                            static_cast<double>(one_shot.refresh_ops) / static_cast<double>(kPeriods), "ops");
    ops_osr.paper_target = 1.0;
    ops_osr.tolerance = 0.0;
    ops_osr.pass = one_shot.refresh_ops == kPeriods;
    BenchRow& ops_rbr = add("refresh_ops_per_period_row_by_row",
                            static_cast<double>(row_by_row.refresh_ops) / static_cast<double>(kPeriods), "ops");
    ops_rbr.paper_target = static_cast<double>(cfg.rows);
    ops_rbr.tolerance = 0.0;
    ops_rbr.pass = row_by_row.refresh_ops == kPeriods * cfg.rows;

    BenchRow& stalls = add("stalled_requests_one_shot", static_cast<double>(one_shot.stalled_requests), "requests");
    stalls.pass = one_shot.stalled_requests <= row_by_row.stalled_requests;
    add("stalled_requests_row_by_row", static_cast<double>(row_by_row.stalled_requests), "requests");
    add("stall_time_one_shot", one_shot.total_stall_time, "s");
    add("stall_time_row_by_row", row_by_row.total_stall_time, "s");
    BenchRow& loss = add("data_loss_events_one_shot", static_cast<double>(one_shot.data_loss_events), "events");
    loss.paper_target = 0.0;
    loss.pass = one_shot.data_loss_events == 0;
    return report;
}

BenchReport run_all_benches(const Calibration& cal, std::uint64_t seed) {
    BenchReport all = run_write_bench(cal, seed);
    all.append(run_search_bench(cal, seed));
    all.append(run_refresh_bench(cal, seed));
    return all;
}

}  // namespace tcamsim
