#pragma once

// Closed-form RC timing and energy primitives shared by every technology.

#include <cstddef>
#include <optional>
#include <vector>

#include "tcamsim/units.hpp"

namespace tcamsim {

struct RcStage {
    Ohms r = 0.0;
    Farads c = 0.0;
};

/// Ordered pull-down network of a mismatching cell. The last stage discharges the matchline;
/// its capacitance is replaced by the matchline total when timed.
struct DischargePath {
    std::vector<RcStage> stages;

    void validate() const;
};

/// Single-pole RC time for a node moving from `v_from` toward `v_rail` to reach `v_threshold`:
/// r c ln(|v_from - v_rail| / |v_threshold - v_rail|). The threshold must lie in the half-open
/// interval from v_from (inclusive, giving 0) to v_rail (exclusive); otherwise ArgumentError.
Seconds rc_transition_time(Ohms r, Farads c, Volts v_from, Volts v_threshold, Volts v_rail);

/// Time for a precharged matchline to fall below `v_sense` with `n_mismatch` parallel pull-downs.
///
/// Every stage is timed to the same fractional swing, ln(vdd / v_sense), so latency ratios between
/// paths do not depend on the sense level. The final stage resistance is divided by n_mismatch.
/// Returns nullopt for n_mismatch == 0: a matched line never settles low.
std::optional<Seconds> matchline_settle_time(const DischargePath& path, Farads c_ml_total,
                                             std::size_t n_mismatch, Volts vdd, Volts v_sense);

/// Energy drawn from the supply to swing `c_total` by `v_swing`: C V^2.
Joules line_switch_energy(Farads c_total, Volts v_swing);

/// Ohmic energy of a write pulse: v^2 t / r.
Joules resistive_write_energy(Volts v, Ohms r, Seconds t);

inline JouleSeconds edp(Joules energy, Seconds latency) { return energy * latency; }

}  // namespace tcamsim
