#pragma once

// Per-technology TCAM cell semantics: ternary encoding into device states, the
// matchline pull-down condition, cell writes and relative footprint.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "tcamsim/devices.hpp"
#include "tcamsim/units.hpp"

namespace tcamsim {

enum class TernaryValue : std::uint8_t { Zero, One, DontCare };

char to_char(TernaryValue v);
/// '0', '1', or 'X'/'x'; nullopt otherwise.
std::optional<TernaryValue> ternary_from_char(char c);

enum class CellKind { Nem3T2N, Sram16T, Rram2T2R, Fefet2F };

inline constexpr CellKind kAllCellKinds[] = {CellKind::Nem3T2N, CellKind::Sram16T, CellKind::Rram2T2R,
                                             CellKind::Fefet2F};

/// Stable identifiers used on the command line and in reports: nem3t2n, sram16t, rram2t2r, fefet2f.
std::string_view cell_kind_id(CellKind kind);
std::optional<CellKind> cell_kind_from_id(std::string_view id);

struct Nem3T2NParams {
    RelayParams relay;
    MosfetParams sense_transistor;     // T_S, discharges the matchline
    Farads c_ts_gate_per_path = 0.1e-15;  // T_S gate load seen by one relay branch
};

struct Sram16TParams {
    MosfetParams compare_stack;  // r_eff: series resistance of one compare pull-down
};

struct Rram2T2RParams {
    RramParams rram;
    MosfetParams access;  // transistor in series with the RRAM in the pull-down
};

struct Fefet2FParams {
    FefetParams fefet;
    Ohms r_channel_on = 50e3;  // low-Vt channel resistance during search
};

struct CellTechnology {
    std::variant<Nem3T2NParams, Sram16TParams, Rram2T2RParams, Fefet2FParams> params;
    double footprint_units = 1.0;

    [[nodiscard]] CellKind kind() const noexcept { return static_cast<CellKind>(params.index()); }

    /// Default parameter bundle and footprint for a technology.
    static CellTechnology defaults(CellKind kind);
    void validate() const;
};

struct NemCell {
    RelayState n1;
    RelayState n2;
    friend bool operator==(const NemCell&, const NemCell&) = default;
};
struct SramCell {
    TernaryValue bit = TernaryValue::DontCare;
    friend bool operator==(const SramCell&, const SramCell&) = default;
};
struct RramCell {
    RramState r1;
    RramState r2;
    friend bool operator==(const RramCell&, const RramCell&) = default;
};
struct FefetCell {
    FefetState f1;
    FefetState f2;
    friend bool operator==(const FefetCell&, const FefetCell&) = default;
};

/// Alternative index matches CellKind.
using CellState = std::variant<NemCell, SramCell, RramCell, FefetCell>;

inline CellKind cell_kind_of(const CellState& s) noexcept { return static_cast<CellKind>(s.index()); }

struct SearchDrive {
    Volts sl = 0.0;
    Volts sl_bar = 0.0;
};

/// One -> first device conducting, Zero -> second, DontCare -> neither. Closed relays hold `vdd`.
CellState encode_ternary(const CellTechnology& tech, TernaryValue value, Volts vdd = 1.0);

/// Inverse of encode_ternary. Throws CorruptedStateError when both devices conduct.
TernaryValue decode_ternary(const CellState& state);

/// One -> (vdd, 0), Zero -> (0, vdd), DontCare -> (0, 0).
SearchDrive key_to_drive(TernaryValue key_bit, Volts vdd);

/// True when the cell opens a pull-down path from the matchline to ground: the first device
/// conducting with sl_bar high, or the second with sl high.
bool pulldown_active(const CellState& state, const SearchDrive& drive);

/// Reference mismatch rule: both symbols definite and different.
constexpr bool ternary_mismatch(TernaryValue stored, TernaryValue key) noexcept {
    return stored != TernaryValue::DontCare && key != TernaryValue::DontCare && stored != key;
}

struct CellWrite {
    CellState state;
    std::size_t devices_switched = 0;
    Joules device_energy = 0.0;  // resistive write energy (RRAM only)
};

/// Re-encodes a cell to `new_value` using the technology's write mechanism at `write_supply`.
///
/// Relays are both driven for tau_mech (write_supply on the one to close, ground on the other).
/// RRAM and FeFET devices receive a program pulse only where their state must change.
/// Throws ConfigError when write_supply cannot switch the devices.
CellWrite cell_write(const CellTechnology& tech, const CellState& old, TernaryValue new_value,
                     Volts write_supply);

inline double cell_footprint(const CellTechnology& tech) noexcept { return tech.footprint_units; }

}  // namespace tcamsim
