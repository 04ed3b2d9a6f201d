#pragma once

// Retention bookkeeping, the one-shot and row-by-row refresh schemes and an
// event-driven replay of timed requests against a refreshing array.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tcamsim/array.hpp"

namespace tcamsim {

struct NoRefresh {};
struct RowByRow {
    Seconds period = 0.0;
};
struct OneShot {
    Volts v_r = 0.5;  // refresh voltage inside (v_po, v_pi)
    Seconds period = 0.0;
};

using RefreshPolicy = std::variant<NoRefresh, RowByRow, OneShot>;

inline constexpr double kDefaultSafetyFactor = 0.8;

std::string describe(const RefreshPolicy& policy);

/// Throws PolicyError when the policy cannot run on `config` (refresh on a static technology,
/// non-positive period, or a one-shot voltage outside the hysteresis window).
void validate_policy(const RefreshPolicy& policy, const ArrayConfig& config);

struct SearchRequest {
    TernaryWord key;
};
struct WriteRequest {
    std::size_t row = 0;
    TernaryWord word;
};

struct TimedRequest {
    Seconds at = 0.0;
    std::variant<SearchRequest, WriteRequest> op;
};

struct WorkloadTrace {
    std::vector<TimedRequest> requests;

    /// Throws ArgumentError when timestamps decrease.
    void validate() const;
    [[nodiscard]] Seconds last_time() const noexcept { return requests.empty() ? 0.0 : requests.back().at; }
};

/// Text lines `<time_ns> SEARCH <ternary>` or `<time_ns> WRITE <row> <ternary>`; '#' starts a
/// comment. Throws ParseError carrying the 1-based line number.
WorkloadTrace parse_trace(std::istream& in);
std::string format_trace(const WorkloadTrace& trace);

struct RefreshStats {
    std::size_t refresh_ops = 0;
    Joules refresh_energy = 0.0;
    Watts average_power = 0.0;
    std::size_t requests = 0;
    std::size_t stalled_requests = 0;
    Seconds total_stall_time = 0.0;
    std::size_t data_loss_events = 0;
    Seconds horizon = 0.0;
};

struct RefreshOutcome {
    TcamArray array;
    Joules energy = 0.0;
    Seconds latency = 0.0;
    std::size_t ops = 0;
};

/// Drives every wordline and both bitlines of every column to v_r at once. Gates take v_r;
/// no relay moves because v_r sits inside the hysteresis window. Energy = all wordlines at vdd
/// plus all bitlines at v_r; latency = one write cycle. PolicyError outside (v_po, v_pi).
RefreshOutcome one_shot_refresh(TcamArray array, Volts v_r);

/// Reads and writes back each row in turn. ops = rows.
RefreshOutcome row_by_row_refresh(TcamArray array);

/// Longest one-shot period that keeps a gate refreshed to v_r above v_po: the retention from v_r
/// scaled by `safety_factor`. NotApplicableError for other policies.
Seconds min_safe_period(const RelayParams& params, const RefreshPolicy& policy,
                        double safety_factor = kDefaultSafetyFactor);

Watts refresh_average_power(Joules energy_per_refresh, Seconds period);

/// Replays `trace` with refreshes at every multiple of the policy period up to `horizon`
/// (default: the last request time). A request arriving while a refresh runs waits for it.
/// Leakage advances between events.
RefreshStats simulate_workload(TcamArray array, const WorkloadTrace& trace, const RefreshPolicy& policy,
                               std::optional<Seconds> horizon = std::nullopt);

}  // namespace tcamsim
