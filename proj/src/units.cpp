#include "tcamsim/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "tcamsim/errors.hpp"

namespace tcamsim {

namespace {

constexpr std::array<std::pair<std::string_view, double>, 10> kPrefixes{{
    {"a", 1e-18},
    {"f", 1e-15},
    {"p", 1e-12},
    {"n", 1e-9},
    {"u", 1e-6},
    {"\xC2\xB5", 1e-6},  // µ
    {"m", 1e-3},
    {"k", 1e3},
    {"M", 1e6},
    {"G", 1e9},
}};

bool matches_symbol(std::string_view suffix, Dimension dim) {
    if (suffix == unit_symbol(dim)) return true;
    if (dim == Dimension::Resistance) {
        return suffix == "ohm" || suffix == "\xCE\xA9";  // Ω
    }
    return false;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string_view unit_symbol(Dimension dim) {
    switch (dim) {
        case Dimension::Voltage: return "V";
        case Dimension::Current: return "A";
        case Dimension::Resistance: return "Ohm";
        case Dimension::Capacitance: return "F";
        case Dimension::Time: return "s";
        case Dimension::Energy: return "J";
        case Dimension::Power: return "W";
    }
    return "?";
}

double parse_quantity(std::string_view text, Dimension dim) {
    const std::string_view input = trim(text);
    double mantissa = 0.0;
    const char* first = input.data();
    const char* last = input.data() + input.size();
    auto [ptr, ec] = std::from_chars(first, last, mantissa);
    if (ec != std::errc{}) {
        throw ParseError(0, fmt::format("'{}' is not a quantity", input));
    }
    std::string_view suffix = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
    if (suffix.empty()) {
        throw ParseError(0, fmt::format("'{}' has no unit; expected a {} quantity", input, unit_symbol(dim)));
    }
    if (matches_symbol(suffix, dim)) return mantissa;
    for (const auto& [prefix, scale] : kPrefixes) {
        if (suffix.size() > prefix.size() && suffix.substr(0, prefix.size()) == prefix &&
            matches_symbol(suffix.substr(prefix.size()), dim)) {
            return mantissa * scale;
        }
    }
    throw ParseError(0, fmt::format("'{}' does not carry unit {}", input, unit_symbol(dim)));
}

std::string format_quantity(double value, Dimension dim) {
    return fmt::format("{:.17g}{}", value, unit_symbol(dim));
}

}  // namespace tcamsim
