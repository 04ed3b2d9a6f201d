#include "tcamsim/devices.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tcamsim/errors.hpp"

namespace tcamsim {

namespace {

void require_non_negative(Seconds duration, const char* what) {
    if (!(duration >= 0.0)) {
        throw ArgumentError(fmt::format("{} must be non-negative, got {}", what, duration));
    }
}

}  // namespace

void RelayParams::validate() const {
    if (!(v_po > 0.0 && v_po < v_pi)) {
        throw ConfigError(fmt::format("relay requires 0 < v_po < v_pi (v_po={}, v_pi={})", v_po, v_pi));
    }
    if (!(c_on > 0.0 && c_off > 0.0 && r_on > 0.0 && tau_mech > 0.0 && i_leak > 0.0)) {
        throw ConfigError("relay c_on, c_off, r_on, tau_mech and i_leak must be positive");
    }
    if (c_off > c_on) {
        throw ConfigError("relay c_off must not exceed c_on");
    }
}

void MosfetParams::validate() const {
    if (!(r_eff > 0.0 && c_gate > 0.0)) {
        throw ConfigError("mosfet r_eff and c_gate must be positive");
    }
}

void RramParams::validate() const {
    if (!(r_on > 0.0 && r_on < r_off)) throw ConfigError("rram requires 0 < r_on < r_off");
    if (!(v_set > 0.0 && v_reset > 0.0 && t_write > 0.0)) {
        throw ConfigError("rram v_set, v_reset and t_write must be positive");
    }
}

void FefetParams::validate() const {
    if (!(v_write > 0.0 && t_write > 0.0)) throw ConfigError("fefet v_write and t_write must be positive");
}

RelayState relay_apply_bias(const RelayState& state, const RelayParams& params, Volts v_gb,
                            Seconds duration, Volts vdd_max) {
    require_non_negative(duration, "bias duration");
    if (!(v_gb >= 0.0 && v_gb <= vdd_max)) {
        throw ArgumentError(fmt::format("gate bias {} V outside [0, {}] V", v_gb, vdd_max));
    }
    RelayState next = state;
    next.v_gb = v_gb;

    const bool pulling_in = !state.closed() && v_gb >= params.v_pi;
    const bool pulling_out = state.closed() && v_gb <= params.v_po;
    if (!pulling_in && !pulling_out) {
        next.pending = 0.0;
        return next;
    }
    next.pending = state.pending + duration;
    if (next.pending >= params.tau_mech) {
        next.position = pulling_in ? RelayPosition::Closed : RelayPosition::Open;
        next.pending = 0.0;
    }
    return next;
}

RelayDecay relay_leak_decay(const RelayState& state, const RelayParams& params, Seconds dt) {
    require_non_negative(dt, "decay interval");
    RelayDecay out{state, false};
    out.state.pending = 0.0;
    if (state.v_gb <= 0.0) {
        out.state.v_gb = 0.0;
        return out;
    }
    Seconds remaining = dt;
    if (state.closed()) {
        // Same expression as relay_retention_time so an exact retention interval triggers pull-out.
        const Seconds to_pull_out =
            state.v_gb > params.v_po ? params.c_on * (state.v_gb - params.v_po) / params.i_leak : 0.0;
        if (remaining < to_pull_out) {
            out.state.v_gb = state.v_gb - params.i_leak * remaining / params.c_on;
            return out;
        }
        out.state.position = RelayPosition::Open;
        out.state.v_gb = std::min(state.v_gb, params.v_po);
        out.pulled_out = true;
        remaining -= to_pull_out;
    }
    out.state.v_gb = std::max(0.0, out.state.v_gb - params.i_leak * remaining / params.c_off);
    return out;
}

Seconds relay_retention_time(const RelayParams& params, Volts v_start) {
    if (!(v_start > params.v_po)) {
        throw ArgumentError(fmt::format("start voltage {} V is not above v_po={} V", v_start, params.v_po));
    }
    return params.c_on * (v_start - params.v_po) / params.i_leak;
}

RramWrite rram_write_transition(const RramState& state, const RramParams& params, Volts voltage,
                                Seconds duration) {
    require_non_negative(duration, "write duration");
    const bool long_enough = duration >= params.t_write;
    RramState next = state;
    if (long_enough && voltage >= params.v_set) {
        next.resistance = RramResistance::Low;
    } else if (long_enough && -voltage >= params.v_reset) {
        next.resistance = RramResistance::High;
    }
    const bool switched = next.resistance != state.resistance;
    const Ohms r = switched || state.resistance == RramResistance::Low ? params.r_on : params.r_off;
    return {next, voltage * voltage * duration / r};
}

FefetState fefet_write_transition(const FefetState& state, const FefetParams& params, Volts voltage,
                                  Seconds duration) {
    require_non_negative(duration, "write duration");
    if (duration < params.t_write) return state;
    if (voltage >= params.v_write) return {FefetPolarization::LowVt};
    if (-voltage >= params.v_write) return {FefetPolarization::HighVt};
    return state;
}

}  // namespace tcamsim
