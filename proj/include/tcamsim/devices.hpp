#pragma once

// Behavioral models of the storage devices used by the TCAM cells: the hysteretic
// four-terminal NEM relay, a switch-RC MOSFET, a bipolar RRAM and a two-state FeFET.
// Every model is a plain value; operations are pure functions of (state, inputs).

#include "tcamsim/units.hpp"

namespace tcamsim {

/// Supply ceiling for any applied bias. Must admit the ±4 V FeFET writes.
inline constexpr Volts kDefaultVddMax = 4.5;

/// Retention from a full 1 V write used to calibrate the default gate leakage.
inline constexpr Seconds kReferenceRetention = 26.5e-6;

enum class RelayPosition { Open, Closed };

struct RelayParams {
    Volts v_pi = 0.53;       // pull-in threshold
    Volts v_po = 0.13;       // pull-out threshold
    Farads c_on = 20e-18;    // gate-body capacitance, closed
    Farads c_off = 15e-18;   // gate-body capacitance, open
    Ohms r_on = 1e3;         // drain-source resistance, closed
    Seconds tau_mech = 2e-9; // mechanical switching latency (pull-in and pull-out)
    // Constant gate-node leakage. Default decays a closed gate from 1 V to v_po in kReferenceRetention.
    Amperes i_leak = 20e-18 * (1.0 - 0.13) / kReferenceRetention;

    /// Throws ConfigError unless 0 < v_po < v_pi, c_off <= c_on and all other fields are positive.
    void validate() const;
};

struct RelayState {
    RelayPosition position = RelayPosition::Open;
    Volts v_gb = 0.0;         // charge stored on the floating gate node
    Seconds pending = 0.0;    // accumulated time of an in-progress mechanical transition

    [[nodiscard]] bool closed() const noexcept { return position == RelayPosition::Closed; }
    friend bool operator==(const RelayState&, const RelayState&) = default;
};

/// Drives the gate-body node to `v_gb` for `duration`.
///
/// An open relay biased at or above v_pi accumulates pending time and closes once the
/// accumulated time reaches tau_mech; a closed relay at or below v_po opens in the same way.
/// Any other bias leaves the position alone and clears the pending timer. The stored gate
/// voltage becomes `v_gb` in all cases.
///
/// Throws ArgumentError for a negative duration or a bias outside [0, vdd_max].
RelayState relay_apply_bias(const RelayState& state, const RelayParams& params, Volts v_gb,
                            Seconds duration, Volts vdd_max = kDefaultVddMax);

struct RelayDecay {
    RelayState state;
    bool pulled_out = false;  // a closed relay lost its data during this interval
};

/// Lets the floating gate leak for `dt` at constant current i_leak.
///
/// The gate discharges at i_leak/c_on while closed. If it reaches v_po the relay opens at that
/// instant and the remainder of the interval discharges at i_leak/c_off. The voltage clamps at 0.
/// Splitting an interval into pieces gives the same result as one call.
RelayDecay relay_leak_decay(const RelayState& state, const RelayParams& params, Seconds dt);

/// Time for a closed relay's gate to decay from `v_start` to v_po: c_on (v_start - v_po) / i_leak.
/// Throws ArgumentError when v_start <= v_po.
Seconds relay_retention_time(const RelayParams& params, Volts v_start);

struct MosfetParams {
    Ohms r_eff = 20e3;        // on-resistance with gate overdriven
    Farads c_gate = 0.1e-15;  // gate capacitance presented as load

    void validate() const;
};

enum class RramResistance { Low, High };

struct RramParams {
    Ohms r_on = 20e3;
    Ohms r_off = 2e6;
    Volts v_set = 1.8;
    Volts v_reset = 1.2;
    Seconds t_write = 10e-9;

    void validate() const;
};

struct RramState {
    RramResistance resistance = RramResistance::High;
    friend bool operator==(const RramState&, const RramState&) = default;
};

struct RramWrite {
    RramState state;
    Joules energy = 0.0;
};

/// Applies a signed write pulse. +v >= v_set for at least t_write sets Low; -v with
/// |v| >= v_reset for at least t_write resets High. A completed transition conducts through
/// r_on; every other pulse conducts through the current resistance. Energy = v^2 t / r.
RramWrite rram_write_transition(const RramState& state, const RramParams& params, Volts voltage,
                                Seconds duration);

enum class FefetPolarization { LowVt, HighVt };

struct FefetParams {
    Volts v_write = 4.0;  // magnitude, applied as ±v_write
    Seconds t_write = 10e-9;

    void validate() const;
};

struct FefetState {
    FefetPolarization polarization = FefetPolarization::HighVt;
    friend bool operator==(const FefetState&, const FefetState&) = default;
};

/// +v_write for t_write programs LowVt, -v_write programs HighVt. The FeFET is a capacitive
/// load, so no device-level energy is returned; line charging is accounted by the array.
FefetState fefet_write_transition(const FefetState& state, const FefetParams& params, Volts voltage,
                                  Seconds duration);

}  // namespace tcamsim
