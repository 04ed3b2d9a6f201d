#pragma once

// TOML run configuration, calibration targets and the calibration file.
//
// Physical quantities are strings with a unit suffix ("20aF", "26.5us", "1kOhm"); a bare number
// for a physical quantity is rejected. Ratios, counts and the seed are plain numbers.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tcamsim/bench.hpp"
#include "tcamsim/refresh.hpp"

namespace tcamsim {

struct ParasiticOverride {
    std::optional<Farads> c_ml_per_cell;
    std::optional<Farads> c_bl_per_cell;
    std::optional<Farads> c_sl_per_cell;
    std::optional<Farads> c_wl_per_cell;
};

enum class PolicyKind { None, RowByRow, OneShot };

struct RunConfig {
    std::vector<CellKind> technologies{std::begin(kAllCellKinds), std::end(kAllCellKinds)};
    CalibrationInputs inputs;
    CalibrationTargets targets;
    std::optional<std::filesystem::path> calibration_path;
    PerTech<ParasiticOverride> parasitic_overrides;

    PolicyKind policy = PolicyKind::OneShot;
    std::optional<Seconds> refresh_period;  // default: min_safe_period for one-shot and row-by-row
    double safety_factor = kDefaultSafetyFactor;

    std::optional<std::filesystem::path> trace_path;
    std::optional<Seconds> trace_horizon;
    std::optional<std::filesystem::path> contents_path;

    std::optional<std::filesystem::path> out_dir;
    std::string format = "csv";
    std::uint64_t seed = 1;
};

/// Loads a run configuration. Relative paths inside are resolved against the file's directory.
/// Throws ConfigError (bad value, unknown key type) or ParseError (TOML syntax).
RunConfig load_run_config(const std::filesystem::path& path);

/// Reads targets from a file holding a [targets] table, or the same keys at top level.
/// Missing keys keep the built-in defaults.
CalibrationTargets load_targets(const std::filesystem::path& path, const CalibrationTargets& base = {});

std::string calibration_to_toml(const Calibration& cal);
Calibration calibration_from_toml(std::string_view text);
Calibration load_calibration(const std::filesystem::path& path);

/// Calibrates from the config's targets (or loads its calibration file) and applies parasitic overrides.
Calibration resolve_calibration(const RunConfig& config);

/// Refresh policy from the config; a missing period becomes min_safe_period of the relay.
RefreshPolicy resolve_policy(const RunConfig& config, const RelayParams& relay);

}  // namespace tcamsim
