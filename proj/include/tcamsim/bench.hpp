#pragma once

// Calibration of lumped parasitics against per-technology reference figures, and the
// write, search and refresh benchmark suites built on top of it.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tcamsim/array.hpp"
#include "tcamsim/refresh.hpp"

namespace tcamsim {

/// One value per cell technology, indexed by CellKind.
template <class T>
struct PerTech {
    std::array<T, 4> values{};

    T& operator[](CellKind k) { return values[static_cast<std::size_t>(k)]; }
    const T& operator[](CellKind k) const { return values[static_cast<std::size_t>(k)]; }
};

struct CalibrationTargets {
    PerTech<Joules> write_energy{{0.35e-12, 0.81e-12, 46e-12, 4.7e-12}};
    PerTech<Seconds> write_latency{{2e-9, 0.5e-9, 10e-9, 10e-9}};
    // Technology / 3T2N. The 3T2N entries are 1.
    PerTech<double> write_efficiency_ratio{{1.0, 2.31, 131.0, 13.5}};
    PerTech<double> search_latency_ratio{{1.0, 5.50, 1.47, 3.36}};
    PerTech<double> search_energy_ratio{{1.0, 2.31, 0.88, 0.84}};
    PerTech<double> search_edp_ratio{{1.0, 12.7, 1.30, 2.83}};
    Joules osr_energy = 520e-15;
    Seconds retention = 26.5e-6;
    Watts refresh_power = 19.6e-9;

    /// Throws CalibrationError naming the first non-positive target, or an EDP ratio that
    /// disagrees with latency x energy by more than 2%.
    void validate() const;
};

/// Fixed inputs that calibration does not touch.
struct CalibrationInputs {
    std::size_t rows = 64;
    std::size_t cols = 64;
    Volts vdd = 1.0;
    Volts v_sense = 0.5;
    Volts v_r = 0.5;
    PerTech<CellTechnology> techs{{CellTechnology::defaults(CellKind::Nem3T2N),
                                   CellTechnology::defaults(CellKind::Sram16T),
                                   CellTechnology::defaults(CellKind::Rram2T2R),
                                   CellTechnology::defaults(CellKind::Fefet2F)}};
};

struct Calibration {
    CalibrationTargets targets;  // what the benches are checked against
    PerTech<ArrayConfig> configs;
    Volts v_r = 0.5;
    Amperes i_leak = 0.0;
    double wl_to_bl_ratio = 1.0;  // c_wl / c_bl per cell, shared by every technology
    Ohms write_driver_r = 0.0;
    // Cells whose devices switch in the benchmark row write. RRAM is fitted; others are every column.
    PerTech<std::size_t> switching_cells;

    [[nodiscard]] const RelayParams& relay() const;
    /// Retention of a closed gate written to vdd.
    [[nodiscard]] Seconds retention() const;
};

/// Closed-form calibration. Every modeled energy is linear in the lumped capacitances and every
/// latency linear in an RC product, so each unknown is solved directly from its target:
///
///   i_leak               from the retention target
///   3T2N c_wl, c_bl      from the 3T2N row-write and one-shot-refresh energies (2x2 linear solve)
///   other c_bl, c_wl     from each row-write energy with the 3T2N wordline/bitline ratio
///   RRAM switching cells largest count of set pulses that fits the RRAM row-write energy
///   write driver         from the SRAM write latency
///   other c_ml, c_sl     from the search energy ratios (3T2N uses its bitline capacitance)
///   pull-down resistance from the search latency ratios
///
/// Throws CalibrationError naming the offending target when a solve leaves the physical domain.
Calibration calibrate(const CalibrationTargets& targets, const CalibrationInputs& inputs = {});

struct BenchRow {
    std::string metric;
    std::string technology;
    double absolute_value = 0.0;
    std::string unit;
    std::optional<double> ratio_vs_3t2n;
    std::optional<double> paper_target;
    std::optional<double> tolerance;  // relative
    bool pass = true;
};

struct BenchReport {
    std::vector<BenchRow> rows;

    [[nodiscard]] bool all_pass() const noexcept;
    [[nodiscard]] std::vector<BenchRow> failures() const;
    [[nodiscard]] std::optional<BenchRow> find(std::string_view metric, std::string_view technology) const;
    void append(const BenchReport& other);
    /// Rows for `technology` plus array-wide rows (technology "all").
    [[nodiscard]] BenchReport filtered(std::string_view technology) const;
};

inline constexpr double kCalibratedTolerance = 0.05;
inline constexpr double kArithmeticTolerance = 0.02;
inline constexpr double kLatencyTolerance = 0.10;
inline constexpr double kRefreshTolerance = 0.01;

/// Writes one random definite row per technology after priming the row so that exactly
/// `switching_cells` cells change. Reports absolute energy and latency and ratios vs 3T2N.
BenchReport run_write_bench(const Calibration& cal, std::uint64_t seed = 1);

/// Worst-case search: random definite contents, key = row 0 with one bit flipped.
BenchReport run_search_bench(const Calibration& cal, std::uint64_t seed = 1);

/// One-shot refresh energy, retention, average refresh power, the refresh/write energy bound and
/// a one-shot vs row-by-row interference comparison on a uniform search workload.
BenchReport run_refresh_bench(const Calibration& cal, std::uint64_t seed = 1);

BenchReport run_all_benches(const Calibration& cal, std::uint64_t seed = 1);

/// Random definite word of `length` symbols.
TernaryWord random_definite_word(std::size_t length, std::uint64_t seed);

}  // namespace tcamsim
