#include "tcamsim/analog.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tcamsim/errors.hpp"

namespace tcamsim {

void DischargePath::validate() const {
    if (stages.empty()) throw ConfigError("discharge path needs at least one stage");
    for (const auto& s : stages) {
        if (!(s.r > 0.0 && s.c > 0.0)) throw ConfigError("discharge path stages need positive r and c");
    }
}

Seconds rc_transition_time(Ohms r, Farads c, Volts v_from, Volts v_threshold, Volts v_rail) {
    const double total = std::abs(v_from - v_rail);
    const double left = std::abs(v_threshold - v_rail);
    const bool between = (v_from <= v_threshold && v_threshold < v_rail) ||
                         (v_rail < v_threshold && v_threshold <= v_from);
    if (!between) {
        throw ArgumentError(fmt::format("threshold {} V is not between {} V and rail {} V", v_threshold,
                                        v_from, v_rail));
    }
    if (r < 0.0 || c < 0.0) throw ArgumentError("negative r or c");
    return r * c * std::log(total / left);
}

std::optional<Seconds> matchline_settle_time(const DischargePath& path, Farads c_ml_total,
                                             std::size_t n_mismatch, Volts vdd, Volts v_sense) {
    if (n_mismatch == 0) return std::nullopt;
    if (path.stages.empty()) throw ArgumentError("empty discharge path");
    Seconds t = 0.0;
    const std::size_t last = path.stages.size() - 1;
    for (std::size_t i = 0; i < last; ++i) {
        t += rc_transition_time(path.stages[i].r, path.stages[i].c, vdd, v_sense, 0.0);
    }
    const Ohms r_final = path.stages[last].r / static_cast<double>(n_mismatch);
    t += rc_transition_time(r_final, c_ml_total, vdd, v_sense, 0.0);
    return t;
}

Joules line_switch_energy(Farads c_total, Volts v_swing) {
    if (c_total < 0.0) throw ArgumentError("negative line capacitance");
    return c_total * v_swing * v_swing;
}

Joules resistive_write_energy(Volts v, Ohms r, Seconds t) {
    if (!(r > 0.0) || t < 0.0) throw ArgumentError("resistive write needs r > 0 and t >= 0");
    return v * v * t / r;
}

}  // namespace tcamsim
