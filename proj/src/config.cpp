#include "tcamsim/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "tcamsim/errors.hpp"

namespace tcamsim {

namespace fs = std::filesystem;

namespace {

// Typed access to one TOML table; `where` prefixes error messages with the key path.
class Section {
public:
    Section(const toml::table* table, std::string where) : table_(table), where_(std::move(where)) {}

    [[nodiscard]] bool present() const noexcept { return table_ != nullptr; }

    [[nodiscard]] Section sub(std::string_view key) const {
        const toml::table* t = nullptr;
        if (table_ != nullptr) {
            if (const toml::node* n = table_->get(key)) {
                t = n->as_table();
                if (t == nullptr) throw ConfigError(fmt::format("{}: expected a table", path(key)));
            }
        }
        return {t, path(key)};
    }

    void quantity(std::string_view key, Dimension dim, double& out) const {
        if (auto v = quantity(key, dim)) out = *v;
    }

    [[nodiscard]] std::optional<double> quantity(std::string_view key, Dimension dim) const {
        const toml::node* n = node(key);
        if (n == nullptr) return std::nullopt;
        if (n->is_number()) {
            throw ConfigError(fmt::format("{}: unitless number; write it with a unit, e.g. \"{}{}\"", path(key),
                                          n->value<double>().value_or(0.0), unit_symbol(dim)));
        }
        const auto* s = n->as_string();
        if (s == nullptr) throw ConfigError(fmt::format("{}: expected a quantity string", path(key)));
        try {
            return parse_quantity(s->get(), dim);
        } catch (const ParseError& e) {
            throw ConfigError(fmt::format("{}: {}", path(key), e.what()));
        }
    }

    void number(std::string_view key, double& out) const {
        const toml::node* n = node(key);
        if (n == nullptr) return;
        if (!n->is_number()) throw ConfigError(fmt::format("{}: expected a number", path(key)));
        out = n->value<double>().value();
    }

    template <class Int>
    void integer(std::string_view key, Int& out) const {
        const toml::node* n = node(key);
        if (n == nullptr) return;
        const auto v = n->value_exact<std::int64_t>();
        if (!v || *v < 0) throw ConfigError(fmt::format("{}: expected a non-negative integer", path(key)));
        out = static_cast<Int>(*v);
    }

    [[nodiscard]] std::optional<std::string> string(std::string_view key) const {
        const toml::node* n = node(key);
        if (n == nullptr) return std::nullopt;
        const auto* s = n->as_string();
        if (s == nullptr) throw ConfigError(fmt::format("{}: expected a string", path(key)));
        return s->get();
    }

    [[nodiscard]] const toml::node* node(std::string_view key) const {
        return table_ == nullptr ? nullptr : table_->get(key);
    }

    [[nodiscard]] std::string path(std::string_view key) const {
        return where_.empty() ? std::string(key) : fmt::format("{}.{}", where_, key);
    }

private:
    const toml::table* table_;
    std::string where_;
};

toml::table parse_toml(std::string_view text, const std::string& source) {
    try {
        return toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        throw ParseError(e.source().begin.line, fmt::format("{}: {}", source, e.description()));
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(toml::table& t, std::string_view key, double value, Dimension dim) {
    t.insert_or_assign(key, format_quantity(value, dim));
}

// --- device parameter blocks -------------------------------------------------------------

void read_mosfet(const Section& s, MosfetParams& p) {
    s.quantity("r_eff", Dimension::Resistance, p.r_eff);
    s.quantity("c_gate", Dimension::Capacitance, p.c_gate);
}

toml::table write_mosfet(const MosfetParams& p) {
    toml::table t;
    put(t, "r_eff", p.r_eff, Dimension::Resistance);
    put(t, "c_gate", p.c_gate, Dimension::Capacitance);
    return t;
}

void read_tech(const Section& s, CellTechnology& tech) {
    if (!s.present()) return;
    s.number("footprint_units", tech.footprint_units);
    if (auto* p = std::get_if<Nem3T2NParams>(&tech.params)) {
        const Section relay = s.sub("relay");
        relay.quantity("v_pi", Dimension::Voltage, p->relay.v_pi);
        relay.quantity("v_po", Dimension::Voltage, p->relay.v_po);
        relay.quantity("c_on", Dimension::Capacitance, p->relay.c_on);
        relay.quantity("c_off", Dimension::Capacitance, p->relay.c_off);
        relay.quantity("r_on", Dimension::Resistance, p->relay.r_on);
        relay.quantity("tau_mech", Dimension::Time, p->relay.tau_mech);
        relay.quantity("i_leak", Dimension::Current, p->relay.i_leak);
        read_mosfet(s.sub("sense_transistor"), p->sense_transistor);
        s.quantity("c_ts_gate_per_path", Dimension::Capacitance, p->c_ts_gate_per_path);
    } else if (auto* p = std::get_if<Sram16TParams>(&tech.params)) {
        read_mosfet(s.sub("compare_stack"), p->compare_stack);
    } else if (auto* p = std::get_if<Rram2T2RParams>(&tech.params)) {
        const Section rram = s.sub("rram");
        rram.quantity("r_on", Dimension::Resistance, p->rram.r_on);
        rram.quantity("r_off", Dimension::Resistance, p->rram.r_off);
        rram.quantity("v_set", Dimension::Voltage, p->rram.v_set);
        rram.quantity("v_reset", Dimension::Voltage, p->rram.v_reset);
        rram.quantity("t_write", Dimension::Time, p->rram.t_write);
        read_mosfet(s.sub("access"), p->access);
    } else if (auto* p = std::get_if<Fefet2FParams>(&tech.params)) {
        const Section fefet = s.sub("fefet");
        fefet.quantity("v_write", Dimension::Voltage, p->fefet.v_write);
        fefet.quantity("t_write", Dimension::Time, p->fefet.t_write);
        s.quantity("r_channel_on", Dimension::Resistance, p->r_channel_on);
    }
}

toml::table write_tech(const CellTechnology& tech) {
    toml::table t;
    t.insert_or_assign("footprint_units", tech.footprint_units);
    if (const auto* p = std::get_if<Nem3T2NParams>(&tech.params)) {
        toml::table relay;
        put(relay, "v_pi", p->relay.v_pi, Dimension::Voltage);
        put(relay, "v_po", p->relay.v_po, Dimension::Voltage);
        put(relay, "c_on", p->relay.c_on, Dimension::Capacitance);
        put(relay, "c_off", p->relay.c_off, Dimension::Capacitance);
        put(relay, "r_on", p->relay.r_on, Dimension::Resistance);
        put(relay, "tau_mech", p->relay.tau_mech, Dimension::Time);
        put(relay, "i_leak", p->relay.i_leak, Dimension::Current);
        t.insert_or_assign("relay", std::move(relay));
        t.insert_or_assign("sense_transistor", write_mosfet(p->sense_transistor));
        put(t, "c_ts_gate_per_path", p->c_ts_gate_per_path, Dimension::Capacitance);
    } else if (const auto* p = std::get_if<Sram16TParams>(&tech.params)) {
        t.insert_or_assign("compare_stack", write_mosfet(p->compare_stack));
    } else if (const auto* p = std::get_if<Rram2T2RParams>(&tech.params)) {
        toml::table rram;
        put(rram, "r_on", p->rram.r_on, Dimension::Resistance);
        put(rram, "r_off", p->rram.r_off, Dimension::Resistance);
        put(rram, "v_set", p->rram.v_set, Dimension::Voltage);
        put(rram, "v_reset", p->rram.v_reset, Dimension::Voltage);
        put(rram, "t_write", p->rram.t_write, Dimension::Time);
        t.insert_or_assign("rram", std::move(rram));
        t.insert_or_assign("access", write_mosfet(p->access));
    } else if (const auto* p = std::get_if<Fefet2FParams>(&tech.params)) {
        toml::table fefet;
        put(fefet, "v_write", p->fefet.v_write, Dimension::Voltage);
        put(fefet, "t_write", p->fefet.t_write, Dimension::Time);
        t.insert_or_assign("fefet", std::move(fefet));
        put(t, "r_channel_on", p->r_channel_on, Dimension::Resistance);
    }
    return t;
}

// --- targets ------------------------------------------------------------------------------

void read_targets(const Section& s, CalibrationTargets& t) {
    if (!s.present()) return;
    s.quantity("osr_energy", Dimension::Energy, t.osr_energy);
    s.quantity("retention", Dimension::Time, t.retention);
    s.quantity("refresh_power", Dimension::Power, t.refresh_power);
    for (CellKind k : kAllCellKinds) {
        const std::string_view id = cell_kind_id(k);
        s.sub("write_energy").quantity(id, Dimension::Energy, t.write_energy[k]);
        s.sub("write_latency").quantity(id, Dimension::Time, t.write_latency[k]);
        s.sub("write_efficiency_ratio").number(id, t.write_efficiency_ratio[k]);
        s.sub("search_latency_ratio").number(id, t.search_latency_ratio[k]);
        s.sub("search_energy_ratio").number(id, t.search_energy_ratio[k]);
        s.sub("search_edp_ratio").number(id, t.search_edp_ratio[k]);
    }
}

toml::table write_targets(const CalibrationTargets& t) {
    toml::table out;
    put(out, "osr_energy", t.osr_energy, Dimension::Energy);
    put(out, "retention", t.retention, Dimension::Time);
    put(out, "refresh_power", t.refresh_power, Dimension::Power);
    toml::table we, wl, wr, sl, se, sd;
    for (CellKind k : kAllCellKinds) {
        const std::string_view id = cell_kind_id(k);
        put(we, id, t.write_energy[k], Dimension::Energy);
        put(wl, id, t.write_latency[k], Dimension::Time);
        wr.insert_or_assign(id, t.write_efficiency_ratio[k]);
        sl.insert_or_assign(id, t.search_latency_ratio[k]);
        se.insert_or_assign(id, t.search_energy_ratio[k]);
        sd.insert_or_assign(id, t.search_edp_ratio[k]);
    }
    out.insert_or_assign("write_energy", std::move(we));
    out.insert_or_assign("write_latency", std::move(wl));
    out.insert_or_assign("write_efficiency_ratio", std::move(wr));
    out.insert_or_assign("search_latency_ratio", std::move(sl));
    out.insert_or_assign("search_energy_ratio", std::move(se));
    out.insert_or_assign("search_edp_ratio", std::move(sd));
    return out;
}

fs::path resolve(const fs::path& base_dir, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
}

}  // namespace

RunConfig load_run_config(const fs::path& path) {
    const toml::table root = parse_toml(read_file(path), path.string());
    const Section top(&root, "");
    const fs::path base = path.parent_path();
    RunConfig cfg;

    top.integer("seed", cfg.seed);
    if (const toml::node* techs = top.node("technologies")) {
        const toml::array* arr = techs->as_array();
        if (arr == nullptr) throw ConfigError("technologies: expected an array of technology ids");
        cfg.technologies.clear();
        for (const auto& n : *arr) {
            const auto id = n.value<std::string>();
            const auto kind = id ? cell_kind_from_id(*id) : std::nullopt;
            if (!kind) throw ConfigError(fmt::format("technologies: unknown id '{}'", id.value_or("?")));
            cfg.technologies.push_back(*kind);
        }
    }

    const Section array = top.sub("array");
    array.integer("rows", cfg.inputs.rows);
    array.integer("cols", cfg.inputs.cols);
    array.quantity("vdd", Dimension::Voltage, cfg.inputs.vdd);
    array.quantity("v_sense", Dimension::Voltage, cfg.inputs.v_sense);

    const Section devices = top.sub("devices");
    for (CellKind k : kAllCellKinds) read_tech(devices.sub(cell_kind_id(k)), cfg.inputs.techs[k]);

    const Section parasitics = top.sub("parasitics");
    for (CellKind k : kAllCellKinds) {
        const Section p = parasitics.sub(cell_kind_id(k));
        auto& o = cfg.parasitic_overrides[k];
        o.c_ml_per_cell = p.quantity("c_ml_per_cell", Dimension::Capacitance);
        o.c_bl_per_cell = p.quantity("c_bl_per_cell", Dimension::Capacitance);
        o.c_sl_per_cell = p.quantity("c_sl_per_cell", Dimension::Capacitance);
        o.c_wl_per_cell = p.quantity("c_wl_per_cell", Dimension::Capacitance);
    }

    if (const toml::node* t = top.node("targets")) {
        if (const auto* s = t->as_string()) {
            cfg.targets = load_targets(resolve(base, s->get()));
        } else {
            read_targets(top.sub("targets"), cfg.targets);
        }
    }
    if (auto p = top.sub("calibration").string("path")) cfg.calibration_path = resolve(base, *p);

    const Section refresh = top.sub("refresh");
    if (auto p = refresh.string("policy")) {
        if (*p == "one-shot") cfg.policy = PolicyKind::OneShot;
        else if (*p == "row-by-row") cfg.policy = PolicyKind::RowByRow;
        else if (*p == "none") cfg.policy = PolicyKind::None;
        else throw ConfigError(fmt::format("refresh.policy: unknown policy '{}'", *p));
    }
    refresh.quantity("v_r", Dimension::Voltage, cfg.inputs.v_r);
    cfg.refresh_period = refresh.quantity("period", Dimension::Time);
    refresh.number("safety_factor", cfg.safety_factor);

    const Section trace = top.sub("trace");
    if (auto p = trace.string("path")) cfg.trace_path = resolve(base, *p);
    cfg.trace_horizon = trace.quantity("horizon", Dimension::Time);

    if (auto p = top.sub("search").string("contents")) cfg.contents_path = resolve(base, *p);

    const Section output = top.sub("output");
    if (auto p = output.string("dir")) cfg.out_dir = resolve(base, *p);
    if (auto p = output.string("format")) cfg.format = *p;
    return cfg;
}

CalibrationTargets load_targets(const fs::path& path, const CalibrationTargets& base) {
    const toml::table root = parse_toml(read_file(path), path.string());
    CalibrationTargets out = base;
    const Section top(&root, "");
    const Section nested = top.sub("targets");
    read_targets(nested.present() ? nested : top, out);
    return out;
}

std::string calibration_to_toml(const Calibration& cal) {
    toml::table root;
    toml::table summary;
    put(summary, "v_r", cal.v_r, Dimension::Voltage);
    put(summary, "i_leak", cal.i_leak, Dimension::Current);
    put(summary, "write_driver_r", cal.write_driver_r, Dimension::Resistance);
    summary.insert_or_assign("wl_to_bl_ratio", cal.wl_to_bl_ratio);
    root.insert_or_assign("calibration", std::move(summary));
    root.insert_or_assign("targets", write_targets(cal.targets));

    toml::table techs;
    for (CellKind k : kAllCellKinds) {
        const ArrayConfig& c = cal.configs[k];
        toml::table t = write_tech(c.tech);
        t.insert_or_assign("rows", static_cast<std::int64_t>(c.rows));
        t.insert_or_assign("cols", static_cast<std::int64_t>(c.cols));
        t.insert_or_assign("switching_cells", static_cast<std::int64_t>(cal.switching_cells[k]));
        put(t, "vdd", c.vdd, Dimension::Voltage);
        put(t, "v_sense", c.v_sense, Dimension::Voltage);
        put(t, "vdd_max", c.vdd_max, Dimension::Voltage);
        put(t, "write_supply", c.write_supply, Dimension::Voltage);
        put(t, "write_driver_r", c.write_driver_r, Dimension::Resistance);
        put(t, "sense_energy_per_row", c.sense_energy_per_row, Dimension::Energy);
        put(t, "c_ml_per_cell", c.parasitics.c_ml_per_cell, Dimension::Capacitance);
        put(t, "c_bl_per_cell", c.parasitics.c_bl_per_cell, Dimension::Capacitance);
        put(t, "c_sl_per_cell", c.parasitics.c_sl_per_cell, Dimension::Capacitance);
        put(t, "c_wl_per_cell", c.parasitics.c_wl_per_cell, Dimension::Capacitance);
        techs.insert_or_assign(cell_kind_id(k), std::move(t));
    }
    root.insert_or_assign("tech", std::move(techs));

    std::ostringstream out;
    out << "# tcamsim calibration\n" << root << '\n';
    return out.str();
}

Calibration calibration_from_toml(std::string_view text) {
    const toml::table root = parse_toml(text, "calibration");
    const Section top(&root, "");
    Calibration cal;
    const Section summary = top.sub("calibration");
    if (!summary.present()) throw ConfigError("calibration file has no [calibration] table");
    summary.quantity("v_r", Dimension::Voltage, cal.v_r);
    summary.quantity("i_leak", Dimension::Current, cal.i_leak);
    summary.quantity("write_driver_r", Dimension::Resistance, cal.write_driver_r);
    summary.number("wl_to_bl_ratio", cal.wl_to_bl_ratio);
    read_targets(top.sub("targets"), cal.targets);

    const Section techs = top.sub("tech");
    for (CellKind k : kAllCellKinds) {
        const Section s = techs.sub(cell_kind_id(k));
        if (!s.present()) throw ConfigError(fmt::format("calibration file lacks [tech.{}]", cell_kind_id(k)));
        ArrayConfig c = ArrayConfig::defaults(k);
        read_tech(s, c.tech);
        s.integer("rows", c.rows);
        s.integer("cols", c.cols);
        s.integer("switching_cells", cal.switching_cells[k]);
        s.quantity("vdd", Dimension::Voltage, c.vdd);
        s.quantity("v_sense", Dimension::Voltage, c.v_sense);
        s.quantity("vdd_max", Dimension::Voltage, c.vdd_max);
        s.quantity("write_supply", Dimension::Voltage, c.write_supply);
        s.quantity("write_driver_r", Dimension::Resistance, c.write_driver_r);
        s.quantity("sense_energy_per_row", Dimension::Energy, c.sense_energy_per_row);
        s.quantity("c_ml_per_cell", Dimension::Capacitance, c.parasitics.c_ml_per_cell);
        s.quantity("c_bl_per_cell", Dimension::Capacitance, c.parasitics.c_bl_per_cell);
        s.quantity("c_sl_per_cell", Dimension::Capacitance, c.parasitics.c_sl_per_cell);
        s.quantity("c_wl_per_cell", Dimension::Capacitance, c.parasitics.c_wl_per_cell);
        c.validate();
        cal.configs[k] = std::move(c);
    }
    return cal;
}

Calibration load_calibration(const fs::path& path) { return calibration_from_toml(read_file(path)); }

Calibration resolve_calibration(const RunConfig& config) {
    Calibration cal =
        config.calibration_path ? load_calibration(*config.calibration_path) : calibrate(config.targets, config.inputs);
    for (CellKind k : kAllCellKinds) {
        const ParasiticOverride& o = config.parasitic_overrides[k];
        LineParasitics& p = cal.configs[k].parasitics;
        if (o.c_ml_per_cell) p.c_ml_per_cell = *o.c_ml_per_cell;
        if (o.c_bl_per_cell) p.c_bl_per_cell = *o.c_bl_per_cell;
        if (o.c_sl_per_cell) p.c_sl_per_cell = *o.c_sl_per_cell;
        if (o.c_wl_per_cell) p.c_wl_per_cell = *o.c_wl_per_cell;
        cal.configs[k].validate();
    }
    return cal;
}

RefreshPolicy resolve_policy(const RunConfig& config, const RelayParams& relay) {
    const Volts v_r = config.inputs.v_r;
    const Seconds period = config.refresh_period.value_or(
        config.policy == PolicyKind::None ? 0.0 : min_safe_period(relay, OneShot{v_r, 1.0}, config.safety_factor));
    switch (config.policy) {
        case PolicyKind::None: return NoRefresh{};
        case PolicyKind::RowByRow: return RowByRow{period};
        case PolicyKind::OneShot: return OneShot{v_r, period};
    }
    return NoRefresh{};
}

}  // namespace tcamsim
