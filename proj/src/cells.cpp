#include "tcamsim/cells.hpp"

#include <utility>

#include <fmt/format.h>

#include "tcamsim/errors.hpp"

namespace tcamsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// (first device conducting, second device conducting)
using Conduction = std::pair<bool, bool>;

Conduction conduction_of(TernaryValue v) {
    switch (v) {
        case TernaryValue::One: return {true, false};
        case TernaryValue::Zero: return {false, true};
        case TernaryValue::DontCare: return {false, false};
    }
    return {false, false};
}

Conduction conduction_of(const CellState& state) {
    return std::visit(overloaded{
                          [](const NemCell& c) { return Conduction{c.n1.closed(), c.n2.closed()}; },
                          [](const SramCell& c) { return conduction_of(c.bit); },
                          [](const RramCell& c) {
                              return Conduction{c.r1.resistance == RramResistance::Low,
                                                c.r2.resistance == RramResistance::Low};
                          },
                          [](const FefetCell& c) {
                              return Conduction{c.f1.polarization == FefetPolarization::LowVt,
                                                c.f2.polarization == FefetPolarization::LowVt};
                          },
                      },
                      state);
}

RelayState relay_for(bool closed, Volts vdd) {
    return closed ? RelayState{RelayPosition::Closed, vdd, 0.0} : RelayState{};
}

RramState rram_for(bool low) { return {low ? RramResistance::Low : RramResistance::High}; }

FefetState fefet_for(bool low_vt) { return {low_vt ? FefetPolarization::LowVt : FefetPolarization::HighVt}; }

}  // namespace

char to_char(TernaryValue v) {
    switch (v) {
        case TernaryValue::Zero: return '0';
        case TernaryValue::One: return '1';
        case TernaryValue::DontCare: return 'X';
    }
    return '?';
}

std::optional<TernaryValue> ternary_from_char(char c) {
    switch (c) {
        case '0': return TernaryValue::Zero;
        case '1': return TernaryValue::One;
        case 'X':
        case 'x': return TernaryValue::DontCare;
        default: return std::nullopt;
    }
}

std::string_view cell_kind_id(CellKind kind) {
    switch (kind) {
        case CellKind::Nem3T2N: return "nem3t2n";
        case CellKind::Sram16T: return "sram16t";
        case CellKind::Rram2T2R: return "rram2t2r";
        case CellKind::Fefet2F: return "fefet2f";
    }
    return "unknown";
}

std::optional<CellKind> cell_kind_from_id(std::string_view id) {
    for (CellKind k : kAllCellKinds) {
        if (cell_kind_id(k) == id) return k;
    }
    return std::nullopt;
}

CellTechnology CellTechnology::defaults(CellKind kind) {
    switch (kind) {
        case CellKind::Nem3T2N: return {Nem3T2NParams{}, 3.0};  // relays sit in BEOL, no silicon area
        case CellKind::Sram16T: return {Sram16TParams{}, 16.0};
        case CellKind::Rram2T2R: return {Rram2T2RParams{}, 2.0};
        case CellKind::Fefet2F: return {Fefet2FParams{}, 2.0};
    }
    throw ArgumentError("unknown cell kind");
}

void CellTechnology::validate() const {
    if (!(footprint_units > 0.0)) throw ConfigError("footprint_units must be positive");
    std::visit(overloaded{
                   [](const Nem3T2NParams& p) {
                       p.relay.validate();
                       p.sense_transistor.validate();
                       if (!(p.c_ts_gate_per_path > 0.0)) throw ConfigError("c_ts_gate_per_path must be positive");
                   },
                   [](const Sram16TParams& p) { p.compare_stack.validate(); },
                   [](const Rram2T2RParams& p) {
                       p.rram.validate();
                       p.access.validate();
                   },
                   [](const Fefet2FParams& p) {
                       p.fefet.validate();
                       if (!(p.r_channel_on > 0.0)) throw ConfigError("r_channel_on must be positive");
                   },
               },
               params);
}

CellState encode_ternary(const CellTechnology& tech, TernaryValue value, Volts vdd) {
    const auto [first, second] = conduction_of(value);
    switch (tech.kind()) {
        case CellKind::Nem3T2N: return NemCell{relay_for(first, vdd), relay_for(second, vdd)};
        case CellKind::Sram16T: return SramCell{value};
        case CellKind::Rram2T2R: return RramCell{rram_for(first), rram_for(second)};
        case CellKind::Fefet2F: return FefetCell{fefet_for(first), fefet_for(second)};
    }
    throw ArgumentError("unknown cell kind");
}

TernaryValue decode_ternary(const CellState& state) {
    const auto [first, second] = conduction_of(state);
    if (first && second) {
        throw CorruptedStateError(
            fmt::format("{} cell has both devices conducting", cell_kind_id(cell_kind_of(state))));
    }
    if (first) return TernaryValue::One;
    if (second) return TernaryValue::Zero;
    return TernaryValue::DontCare;
}

SearchDrive key_to_drive(TernaryValue key_bit, Volts vdd) {
    switch (key_bit) {
        case TernaryValue::One: return {vdd, 0.0};
        case TernaryValue::Zero: return {0.0, vdd};
        case TernaryValue::DontCare: return {0.0, 0.0};
    }
    return {};
}

bool pulldown_active(const CellState& state, const SearchDrive& drive) {
    const auto [first, second] = conduction_of(state);
    return (first && drive.sl_bar > 0.0) || (second && drive.sl > 0.0);
}

CellWrite cell_write(const CellTechnology& tech, const CellState& old, TernaryValue new_value,
                     Volts write_supply) {
    if (cell_kind_of(old) != tech.kind()) {
        throw ArgumentError("cell state does not belong to the technology being written");
    }
    const auto [first, second] = conduction_of(new_value);
    const auto [was_first, was_second] = conduction_of(old);
    CellWrite out{old, 0, 0.0};

    std::visit(overloaded{
                   [&](const Nem3T2NParams& p) {
                       if (write_supply < p.relay.v_pi) {
                           throw ConfigError(fmt::format("write supply {} V below relay pull-in {} V",
                                                         write_supply, p.relay.v_pi));
                       }
                       auto drive = [&](const RelayState& r, bool close) {
                           return relay_apply_bias(r, p.relay, close ? write_supply : 0.0, p.relay.tau_mech);
                       };
                       const auto& cell = std::get<NemCell>(old);
                       NemCell next{drive(cell.n1, first), drive(cell.n2, second)};
                       out.devices_switched = static_cast<std::size_t>(next.n1.closed() != cell.n1.closed()) +
                                              static_cast<std::size_t>(next.n2.closed() != cell.n2.closed());
                       out.state = next;
                   },
                   [&](const Sram16TParams&) {
                       out.devices_switched = static_cast<std::size_t>(first != was_first) +
                                              static_cast<std::size_t>(second != was_second);
                       out.state = SramCell{new_value};
                   },
                   [&](const Rram2T2RParams& p) {
                       if (write_supply < p.rram.v_set || write_supply < p.rram.v_reset) {
                           throw ConfigError(fmt::format("write supply {} V cannot set ({} V) and reset ({} V) RRAM",
                                                         write_supply, p.rram.v_set, p.rram.v_reset));
                       }
                       auto program = [&](const RramState& r, bool low) {
                           if ((r.resistance == RramResistance::Low) == low) return r;
                           const RramWrite w = rram_write_transition(r, p.rram, low ? p.rram.v_set : -p.rram.v_reset,
                                                                     p.rram.t_write);
                           out.device_energy += w.energy;
                           ++out.devices_switched;
                           return w.state;
                       };
                       const auto& cell = std::get<RramCell>(old);
                       out.state = RramCell{program(cell.r1, first), program(cell.r2, second)};
                   },
                   [&](const Fefet2FParams& p) {
                       if (write_supply < p.fefet.v_write) {
                           throw ConfigError(fmt::format("write supply {} V below FeFET write voltage {} V",
                                                         write_supply, p.fefet.v_write));
                       }
                       auto program = [&](const FefetState& f, bool low_vt) {
                           if ((f.polarization == FefetPolarization::LowVt) == low_vt) return f;
                           ++out.devices_switched;
                           return fefet_write_transition(f, p.fefet, low_vt ? p.fefet.v_write : -p.fefet.v_write,
                                                         p.fefet.t_write);
                       };
                       const auto& cell = std::get<FefetCell>(old);
                       out.state = FefetCell{program(cell.f1, first), program(cell.f2, second)};
                   },
               },
               tech.params);
    return out;
}

}  // namespace tcamsim
