#pragma once

// The rows x cols TCAM array: ternary storage, lumped line parasitics and the
// functional and timed write, search, precharge and retention operations.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcamsim/analog.hpp"
#include "tcamsim/cells.hpp"
#include "tcamsim/units.hpp"

namespace tcamsim {

/// Per-cell line capacitances, already scaled by the technology footprint.
struct LineParasitics {
    Farads c_ml_per_cell = 0.0;
    Farads c_bl_per_cell = 0.0;
    Farads c_sl_per_cell = 0.0;
    Farads c_wl_per_cell = 0.0;

    /// Every line gets `c_per_unit * footprint_units` per cell.
    static LineParasitics scaled(Farads c_per_unit, double footprint_units);
    void validate() const;
};

/// Write-completion criterion for a line: charged to this fraction of its swing.
inline constexpr double kLineSettleFraction = 0.9;

struct ArrayConfig {
    std::size_t rows = 64;
    std::size_t cols = 64;
    Volts vdd = 1.0;
    Volts v_sense = 0.5;  // matchline sense threshold
    CellTechnology tech = CellTechnology::defaults(CellKind::Nem3T2N);
    LineParasitics parasitics;
    Volts write_supply = 1.0;  // bitline write voltage magnitude
    Ohms write_driver_r = 8.7e3;
    Joules sense_energy_per_row = 0.0;
    Volts vdd_max = kDefaultVddMax;

    /// Uncalibrated physical defaults for `kind`.
    static ArrayConfig defaults(CellKind kind, std::size_t rows = 64, std::size_t cols = 64);
    /// Throws DimensionError for empty dimensions and ConfigError for everything else.
    void validate() const;
};

/// Technology write voltage: 1 V for relays and SRAM, v_set/v_reset maximum for RRAM, v_write for FeFET.
Volts default_write_supply(const CellTechnology& tech);

class TernaryWord {
public:
    TernaryWord() = default;
    explicit TernaryWord(std::vector<TernaryValue> symbols) : symbols_(std::move(symbols)) {}
    TernaryWord(std::size_t length, TernaryValue fill) : symbols_(length, fill) {}

    /// Parses a string over {0, 1, X, x}. Throws ParseError on any other character.
    static TernaryWord parse(std::string_view text);

    [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
    [[nodiscard]] TernaryValue operator[](std::size_t i) const { return symbols_[i]; }
    TernaryValue& operator[](std::size_t i) { return symbols_[i]; }
    [[nodiscard]] std::span<const TernaryValue> symbols() const noexcept { return symbols_; }
    [[nodiscard]] bool definite() const noexcept;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const TernaryWord&, const TernaryWord&) = default;

private:
    std::vector<TernaryValue> symbols_;
};

struct EnergyComponent {
    std::string line;  // "wordline", "bitline", "device", "matchline", "searchline", "sense"
    Joules energy = 0.0;
};

struct EnergyLatencyReport {
    Joules energy = 0.0;
    Seconds latency = 0.0;
    std::vector<EnergyComponent> breakdown;

    [[nodiscard]] JouleSeconds edp() const noexcept { return energy * latency; }
    /// Energy of one named component, 0 when absent.
    [[nodiscard]] Joules component(std::string_view line) const noexcept;
    void add(std::string line, Joules e);
};

struct DataLossEvent {
    std::size_t row = 0;
    std::size_t col = 0;
    int device = 1;  // 1 = N1, 2 = N2
    friend bool operator==(const DataLossEvent&, const DataLossEvent&) = default;
};

struct Elapse;

class TcamArray {
public:
    /// Every cell encodes DontCare; matchlines start at 0 V.
    explicit TcamArray(ArrayConfig config);

    [[nodiscard]] const ArrayConfig& config() const noexcept { return config_; }
    [[nodiscard]] std::size_t rows() const noexcept { return config_.rows; }
    [[nodiscard]] std::size_t cols() const noexcept { return config_.cols; }

    [[nodiscard]] const CellState& cell(std::size_t row, std::size_t col) const;
    void set_cell(std::size_t row, std::size_t col, CellState state);
    [[nodiscard]] std::span<const CellState> row_cells(std::size_t row) const;

    [[nodiscard]] std::span<const Volts> matchlines() const noexcept { return ml_voltage_; }
    void set_matchline(std::size_t row, Volts v);

    /// Decoded contents of one row.
    [[nodiscard]] TernaryWord decode_row(std::size_t row) const;

private:
    friend Elapse elapse(TcamArray array, Seconds dt);

    ArrayConfig config_;
    std::vector<CellState> cells_;
    std::vector<Volts> ml_voltage_;
};

TcamArray new_array(const ArrayConfig& config);

/// Pull-down network of one mismatching cell for the configured technology.
DischargePath search_path(const ArrayConfig& config);

/// Wordline rise + bitline rise + device switching time (tau_mech for relays, t_write for
/// RRAM/FeFET, none for SRAM). Relays start moving once the bitline crosses v_pi.
Seconds write_cycle_time(const ArrayConfig& config);

struct RowWrite {
    TcamArray array;
    EnergyLatencyReport report;
    std::size_t devices_switched = 0;
};

/// Writes one row. Energy = wordline charge + driven bitlines at write_supply + resistive device
/// energy; latency = write_cycle_time. Addressing and decoding are not included.
RowWrite write_row(TcamArray array, std::size_t row, const TernaryWord& word);

struct RowRead {
    TernaryWord word;
    EnergyLatencyReport report;
};

/// Reads one row back (wordline plus complementary bitline sensing at vdd).
RowRead read_row(const TcamArray& array, std::size_t row);

/// Row r matches iff no cell opens a pull-down path under the key's searchline drive.
std::vector<bool> search_functional(const TcamArray& array, const TernaryWord& key);

struct TimedSearch {
    std::vector<bool> matches;
    std::vector<std::size_t> mismatch_counts;
    std::vector<std::optional<Seconds>> settle_times;  // nullopt for matched rows
    EnergyLatencyReport report;
};

/// Functional search plus energy and timing.
///
/// Energy = matchline restore for every row this search discharges + searchline drive (each line
/// charged from ground after precharge) + per-row sense energy. The reported latency is the
/// single-mismatch settle time, the worst case any sensed row can take.
TimedSearch search_timed(const TcamArray& array, const TernaryWord& key);

struct Precharge {
    TcamArray array;
    Joules energy = 0.0;
};

/// Raises every matchline to vdd; each row costs (cols c_ml) vdd (vdd - v_row).
Precharge precharge(TcamArray array);

struct Elapse {
    TcamArray array;
    std::vector<DataLossEvent> losses;
};

/// Advances floating-gate leakage by `dt` on every relay. No-op for static technologies.
Elapse elapse(TcamArray array, Seconds dt);

/// One row per line over {0, 1, X}.
std::string export_contents(const TcamArray& array);

/// Reads contents written by export_contents (blank lines and '#' comments are skipped).
/// Dimensions come from the text; `base` supplies everything else. Throws ParseError.
TcamArray import_contents(std::istream& in, ArrayConfig base);

}  // namespace tcamsim
