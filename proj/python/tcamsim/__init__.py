"""NEM-relay dynamic TCAM simulator with SRAM, RRAM and FeFET baselines.

Quantities are SI floats (volts, seconds, farads, joules). Arrays are values:
every operation returns a new array instead of mutating its argument.
"""

from ._core import (
    ArrayConfig,
    BenchReport,
    BenchRow,
    Calibration,
    CalibrationTargets,
    CalibrationError,
    CellKind,
    ConfigError,
    CorruptedStateError,
    DimensionError,
    Error,
    NoRefresh,
    NotApplicableError,
    OneShot,
    ParseError,
    PolicyError,
    RefreshStats,
    RelayParams,
    RelayPosition,
    RelayState,
    RowByRow,
    TcamArray,
    TernaryValue,
    TernaryWord,
    calibrate,
    elapse,
    min_safe_period,
    new_array,
    one_shot_refresh,
    parse_trace,
    precharge,
    refresh_average_power,
    relay_apply_bias,
    relay_leak_decay,
    relay_retention_time,
    report_to_csv,
    report_to_json,
    row_by_row_refresh,
    run_all_benches,
    run_refresh_bench,
    run_search_bench,
    run_write_bench,
    search_functional,
    search_timed,
    simulate_workload,
    write_row,
)

__all__ = [name for name in dir() if not name.startswith("_")]
