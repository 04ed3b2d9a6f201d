#include "tcamsim/array.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include <fmt/format.h>

#include "tcamsim/errors.hpp"

namespace tcamsim {

namespace {

// Uncalibrated wire load per cell per footprint unit.
constexpr Farads kDefaultCellCapPerUnit = 28e-18;

std::pair<bool, bool> drives_high(TernaryValue v) {
    return {v == TernaryValue::One, v == TernaryValue::Zero};
}

void check_row(const TcamArray& array, std::size_t row) {
    if (row >= array.rows()) {
        throw DimensionError(fmt::format("row {} out of range for {} rows", row, array.rows()));
    }
}

void check_word(const TcamArray& array, const TernaryWord& word, const char* what) {
    if (word.size() != array.cols()) {
        throw DimensionError(fmt::format("{} has {} symbols, array has {} columns", what, word.size(), array.cols()));
    }
}

Farads wordline_cap(const ArrayConfig& c) { return static_cast<double>(c.cols) * c.parasitics.c_wl_per_cell; }
Farads bitline_cap(const ArrayConfig& c) { return static_cast<double>(c.rows) * c.parasitics.c_bl_per_cell; }
Farads searchline_cap(const ArrayConfig& c) { return static_cast<double>(c.rows) * c.parasitics.c_sl_per_cell; }
Farads matchline_cap(const ArrayConfig& c) { return static_cast<double>(c.cols) * c.parasitics.c_ml_per_cell; }

Seconds line_rise(Ohms r, Farads c, double fraction) {
    return rc_transition_time(r, c, 0.0, fraction, 1.0);
}

}  // namespace

LineParasitics LineParasitics::scaled(Farads c_per_unit, double footprint_units) {
    const Farads c = c_per_unit * footprint_units;
    return {c, c, c, c};
}

void LineParasitics::validate() const {
    if (c_ml_per_cell < 0.0 || c_bl_per_cell < 0.0 || c_sl_per_cell < 0.0 || c_wl_per_cell < 0.0) {
        throw ConfigError("line parasitics must be non-negative");
    }
}

Volts default_write_supply(const CellTechnology& tech) {
    if (const auto* r = std::get_if<Rram2T2RParams>(&tech.params)) return std::max(r->rram.v_set, r->rram.v_reset);
    if (const auto* f = std::get_if<Fefet2FParams>(&tech.params)) return f->fefet.v_write;
    return 1.0;
}

ArrayConfig ArrayConfig::defaults(CellKind kind, std::size_t rows, std::size_t cols) {
    ArrayConfig c;
    c.rows = rows;
    c.cols = cols;
    c.tech = CellTechnology::defaults(kind);
    c.parasitics = LineParasitics::scaled(kDefaultCellCapPerUnit, c.tech.footprint_units);
    c.write_supply = default_write_supply(c.tech);
    return c;
}

void ArrayConfig::validate() const {
    if (rows == 0 || cols == 0) throw DimensionError(fmt::format("array must be at least 1x1, got {}x{}", rows, cols));
    if (!(vdd > 0.0 && v_sense > 0.0 && v_sense < vdd)) {
        throw ConfigError(fmt::format("need 0 < v_sense < vdd (v_sense={}, vdd={})", v_sense, vdd));
    }
    if (!(write_supply > 0.0 && write_supply <= vdd_max)) throw ConfigError("write supply outside (0, vdd_max]");
    if (!(write_driver_r > 0.0)) throw ConfigError("write driver resistance must be positive");
    if (sense_energy_per_row < 0.0) throw ConfigError("sense energy must be non-negative");
    tech.validate();
    parasitics.validate();
}

TernaryWord TernaryWord::parse(std::string_view text) {
    std::vector<TernaryValue> symbols;
    symbols.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto v = ternary_from_char(text[i]);
        if (!v) throw ParseError(0, fmt::format("invalid ternary symbol '{}' at position {}", text[i], i));
        symbols.push_back(*v);
    }
    return TernaryWord(std::move(symbols));
}

bool TernaryWord::definite() const noexcept {
    return std::none_of(symbols_.begin(), symbols_.end(), [](TernaryValue v) { return v == TernaryValue::DontCare; });
}

std::string TernaryWord::to_string() const {
    std::string s;
    s.reserve(symbols_.size());
    for (TernaryValue v : symbols_) s.push_back(to_char(v));
    return s;
}

Joules EnergyLatencyReport::component(std::string_view line) const noexcept {
    Joules total = 0.0;
    for (const auto& c : breakdown) {
        if (c.line == line) total += c.energy;
    }
    return total;
}

void EnergyLatencyReport::add(std::string line, Joules e) {
    energy += e;
    for (auto& c : breakdown) {
        if (c.line == line) {
            c.energy += e;
            return;
        }
    }
    breakdown.push_back({std::move(line), e});
}

TcamArray::TcamArray(ArrayConfig config) : config_(std::move(config)) {
    config_.validate();
    cells_.assign(config_.rows * config_.cols, encode_ternary(config_.tech, TernaryValue::DontCare, config_.vdd));
    ml_voltage_.assign(config_.rows, 0.0);
}

const CellState& TcamArray::cell(std::size_t row, std::size_t col) const {
    if (row >= rows() || col >= cols()) throw DimensionError(fmt::format("cell ({}, {}) out of range", row, col));
    return cells_[row * cols() + col];
}

void TcamArray::set_cell(std::size_t row, std::size_t col, CellState state) {
    if (row >= rows() || col >= cols()) throw DimensionError(fmt::format("cell ({}, {}) out of range", row, col));
    if (cell_kind_of(state) != config_.tech.kind()) throw ArgumentError("cell state of the wrong technology");
    cells_[row * cols() + col] = std::move(state);
}

std::span<const CellState> TcamArray::row_cells(std::size_t row) const {
    if (row >= rows()) throw DimensionError(fmt::format("row {} out of range", row));
    return std::span<const CellState>(cells_).subspan(row * cols(), cols());
}

void TcamArray::set_matchline(std::size_t row, Volts v) {
    if (row >= rows()) throw DimensionError(fmt::format("row {} out of range", row));
    ml_voltage_[row] = std::clamp(v, 0.0, config_.vdd);
}

TernaryWord TcamArray::decode_row(std::size_t row) const {
    const auto cells = row_cells(row);
    std::vector<TernaryValue> symbols;
    symbols.reserve(cells.size());
    for (const auto& c : cells) symbols.push_back(decode_ternary(c));
    return TernaryWord(std::move(symbols));
}

TcamArray new_array(const ArrayConfig& config) { return TcamArray(config); }

DischargePath search_path(const ArrayConfig& config) {
    const Farads c_ml = matchline_cap(config);
    const auto& params = config.tech.params;
    if (const auto* p = std::get_if<Nem3T2NParams>(&params)) {
        return {{{p->relay.r_on, p->c_ts_gate_per_path}, {p->sense_transistor.r_eff, c_ml}}};
    }
    if (const auto* p = std::get_if<Sram16TParams>(&params)) return {{{p->compare_stack.r_eff, c_ml}}};
    if (const auto* p = std::get_if<Rram2T2RParams>(&params)) return {{{p->access.r_eff + p->rram.r_on, c_ml}}};
    const auto& f = std::get<Fefet2FParams>(params);
    return {{{f.r_channel_on, c_ml}}};
}

Seconds write_cycle_time(const ArrayConfig& config) {
    const Ohms r = config.write_driver_r;
    const Seconds t_wl = line_rise(r, wordline_cap(config), kLineSettleFraction);
    const auto& params = config.tech.params;
    if (const auto* p = std::get_if<Nem3T2NParams>(&params)) {
        const double fraction = p->relay.v_pi / config.write_supply;
        if (!(fraction < 1.0)) throw ConfigError("write supply must exceed the relay pull-in voltage");
        return t_wl + line_rise(r, bitline_cap(config), fraction) + p->relay.tau_mech;
    }
    Seconds t_device = 0.0;
    if (const auto* p = std::get_if<Rram2T2RParams>(&params)) t_device = p->rram.t_write;
    if (const auto* p = std::get_if<Fefet2FParams>(&params)) t_device = p->fefet.t_write;
    return t_wl + line_rise(r, bitline_cap(config), kLineSettleFraction) + t_device;
}

RowWrite write_row(TcamArray array, std::size_t row, const TernaryWord& word) {
    check_row(array, row);
    check_word(array, word, "write word");
    const ArrayConfig& cfg = array.config();

    RowWrite out{std::move(array), {}, 0};
    std::size_t driven_bitlines = 0;
    Joules device_energy = 0.0;
    for (std::size_t c = 0; c < cfg.cols; ++c) {
        const CellWrite w = cell_write(cfg.tech, out.array.cell(row, c), word[c], cfg.write_supply);
        out.devices_switched += w.devices_switched;
        device_energy += w.device_energy;
        const auto [bl, bl_bar] = drives_high(word[c]);
        driven_bitlines += static_cast<std::size_t>(bl) + static_cast<std::size_t>(bl_bar);
        out.array.set_cell(row, c, w.state);
    }
    const ArrayConfig& after = out.array.config();
    out.report.add("wordline", line_switch_energy(wordline_cap(after), after.vdd));
    out.report.add("bitline",
                   static_cast<double>(driven_bitlines) * line_switch_energy(bitline_cap(after), after.write_supply));
    out.report.add("device", device_energy);
    out.report.latency = write_cycle_time(after);
    return out;
}

RowRead read_row(const TcamArray& array, std::size_t row) {
    check_row(array, row);
    const ArrayConfig& cfg = array.config();
    RowRead out{array.decode_row(row), {}};
    out.report.add("wordline", line_switch_energy(wordline_cap(cfg), cfg.vdd));
    out.report.add("bitline", 2.0 * static_cast<double>(cfg.cols) * line_switch_energy(bitline_cap(cfg), cfg.vdd));
    out.report.latency = line_rise(cfg.write_driver_r, wordline_cap(cfg), kLineSettleFraction) +
                         line_rise(cfg.write_driver_r, bitline_cap(cfg), kLineSettleFraction);
    return out;
}

std::vector<bool> search_functional(const TcamArray& array, const TernaryWord& key) {
    check_word(array, key, "search key");
    std::vector<SearchDrive> drives;
    drives.reserve(key.size());
    for (TernaryValue v : key.symbols()) drives.push_back(key_to_drive(v, array.config().vdd));

    std::vector<bool> matches(array.rows(), true);
    for (std::size_t r = 0; r < array.rows(); ++r) {
        const auto cells = array.row_cells(r);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (pulldown_active(cells[c], drives[c])) {
                matches[r] = false;
                break;
            }
        }
    }
    return matches;
}

TimedSearch search_timed(const TcamArray& array, const TernaryWord& key) {
    check_word(array, key, "search key");
    const ArrayConfig& cfg = array.config();
    std::vector<SearchDrive> drives;
    drives.reserve(key.size());
    std::size_t driven_searchlines = 0;
    for (TernaryValue v : key.symbols()) {
        drives.push_back(key_to_drive(v, cfg.vdd));
        const auto [sl, sl_bar] = drives_high(v);
        driven_searchlines += static_cast<std::size_t>(sl) + static_cast<std::size_t>(sl_bar);
    }

    const DischargePath path = search_path(cfg);
    const Farads c_ml = matchline_cap(cfg);
    TimedSearch out;
    out.matches.assign(cfg.rows, true);
    out.mismatch_counts.assign(cfg.rows, 0);
    out.settle_times.assign(cfg.rows, std::nullopt);
    std::size_t discharged = 0;
    for (std::size_t r = 0; r < cfg.rows; ++r) {
        const auto cells = array.row_cells(r);
        std::size_t n = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) n += static_cast<std::size_t>(pulldown_active(cells[c], drives[c]));
        out.mismatch_counts[r] = n;
        out.matches[r] = n == 0;
        if (n > 0) {
            ++discharged;
            out.settle_times[r] = matchline_settle_time(path, c_ml, n, cfg.vdd, cfg.v_sense);
        }
    }
    out.report.add("matchline", static_cast<double>(discharged) * line_switch_energy(c_ml, cfg.vdd));
    out.report.add("searchline",
                   static_cast<double>(driven_searchlines) * line_switch_energy(searchline_cap(cfg), cfg.vdd));
    out.report.add("sense", static_cast<double>(cfg.rows) * cfg.sense_energy_per_row);
    out.report.latency = *matchline_settle_time(path, c_ml, 1, cfg.vdd, cfg.v_sense);
    return out;
}

Precharge precharge(TcamArray array) {
    const ArrayConfig& cfg = array.config();
    const Farads c_ml = matchline_cap(cfg);
    Joules energy = 0.0;
    for (std::size_t r = 0; r < cfg.rows; ++r) {
        const Volts v = array.matchlines()[r];
        if (v < cfg.vdd) energy += c_ml * cfg.vdd * (cfg.vdd - v);
    }
    for (std::size_t r = 0; r < cfg.rows; ++r) array.set_matchline(r, cfg.vdd);
    return {std::move(array), energy};
}

Elapse elapse(TcamArray array, Seconds dt) {
    if (!(dt >= 0.0)) throw ArgumentError("elapsed time must be non-negative");
    const auto* p = std::get_if<Nem3T2NParams>(&array.config().tech.params);
    Elapse out{std::move(array), {}};
    if (p == nullptr) return out;
    const RelayParams relay = p->relay;
    const std::size_t cols = out.array.cols();
    auto& cells = out.array.cells_;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto& cell = std::get<NemCell>(cells[i]);
        if (cell.n1.v_gb <= 0.0 && cell.n2.v_gb <= 0.0 && cell.n1.pending == 0.0 && cell.n2.pending == 0.0) continue;
        const RelayDecay d1 = relay_leak_decay(cell.n1, relay, dt);
        const RelayDecay d2 = relay_leak_decay(cell.n2, relay, dt);
        if (d1.pulled_out) out.losses.push_back({i / cols, i % cols, 1});
        if (d2.pulled_out) out.losses.push_back({i / cols, i % cols, 2});
        cell = NemCell{d1.state, d2.state};
    }
    return out;
}

std::string export_contents(const TcamArray& array) {
    std::string text;
    text.reserve(array.rows() * (array.cols() + 1));
    for (std::size_t r = 0; r < array.rows(); ++r) {
        text += array.decode_row(r).to_string();
        text.push_back('\n');
    }
    return text;
}

TcamArray import_contents(std::istream& in, ArrayConfig base) {
    std::vector<TernaryWord> words;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t");
        try {
            words.push_back(TernaryWord::parse(std::string_view(line).substr(first, last - first + 1)));
        } catch (const ParseError& e) {
            throw ParseError(line_no, e.what());
        }
        if (words.back().size() != words.front().size()) {
            throw ParseError(line_no, fmt::format("row has {} symbols, expected {}", words.back().size(),
                                                  words.front().size()));
        }
    }
    if (words.empty()) throw ParseError(0, "array contents are empty");
    base.rows = words.size();
    base.cols = words.front().size();
    TcamArray array(std::move(base));
    for (std::size_t r = 0; r < words.size(); ++r) {
        for (std::size_t c = 0; c < words[r].size(); ++c) {
            array.set_cell(r, c, encode_ternary(array.config().tech, words[r][c], array.config().write_supply));
        }
    }
    return array;
}

}  // namespace tcamsim
