#pragma once

#include <string>
#include <string_view>

namespace tcamsim {

// All quantities are carried in SI base units.
using Volts = double;
using Amperes = double;
using Ohms = double;
using Farads = double;
using Seconds = double;
using Joules = double;
using Watts = double;
using JouleSeconds = double;

enum class Dimension { Voltage, Current, Resistance, Capacitance, Time, Energy, Power };

/// SI symbol for a dimension ("V", "A", "Ohm", "F", "s", "J", "W").
std::string_view unit_symbol(Dimension dim);

/// Parses a quantity such as "20aF", "0.53V", "1kOhm", "26.5us" or "500mV" into SI units.
/// The unit symbol is mandatory; a bare number or a symbol of another dimension throws ParseError.
/// Accepted prefixes: a f p n u µ m k M G.
double parse_quantity(std::string_view text, Dimension dim);

/// Formats an SI value with full round-trip precision, e.g. "6.5660377358490566e-13A".
std::string format_quantity(double value, Dimension dim);

}  // namespace tcamsim
