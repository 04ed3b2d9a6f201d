#include "tcamsim/refresh.hpp"

#include <istream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "tcamsim/errors.hpp"

namespace tcamsim {

namespace {

const RelayParams& relay_of(const ArrayConfig& config, const char* op) {
    const auto* p = std::get_if<Nem3T2NParams>(&config.tech.params);
    if (p == nullptr) {
        throw PolicyError(fmt::format("{} needs a {} array, got {}", op, cell_kind_id(CellKind::Nem3T2N),
                                      cell_kind_id(config.tech.kind())));
    }
    return p->relay;
}

Seconds period_of(const RefreshPolicy& policy) {
    if (const auto* p = std::get_if<RowByRow>(&policy)) return p->period;
    if (const auto* p = std::get_if<OneShot>(&policy)) return p->period;
    return std::numeric_limits<double>::infinity();
}

}  // namespace

std::string describe(const RefreshPolicy& policy) {
    if (const auto* p = std::get_if<RowByRow>(&policy)) return fmt::format("row-by-row(period={:.6g}s)", p->period);
    if (const auto* p = std::get_if<OneShot>(&policy)) {
        return fmt::format("one-shot(v_r={:.6g}V, period={:.6g}s)", p->v_r, p->period);
    }
    return "none";
}

void validate_policy(const RefreshPolicy& policy, const ArrayConfig& config) {
    if (std::holds_alternative<NoRefresh>(policy)) return;
    const RelayParams& relay = relay_of(config, "refresh");
    if (!(period_of(policy) > 0.0)) throw PolicyError("refresh period must be positive");
    if (const auto* p = std::get_if<OneShot>(&policy)) {
        if (!(p->v_r > relay.v_po && p->v_r < relay.v_pi)) {
            throw PolicyError(fmt::format("refresh voltage {} V outside the hysteresis window ({}, {}) V", p->v_r,
                                          relay.v_po, relay.v_pi));
        }
    }
}

void WorkloadTrace::validate() const {
    for (std::size_t i = 1; i < requests.size(); ++i) {
        if (requests[i].at < requests[i - 1].at) {
            throw ArgumentError(fmt::format("request {} at {} s precedes the previous one", i, requests[i].at));
        }
    }
}

WorkloadTrace parse_trace(std::istream& in) {
    WorkloadTrace trace;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string time_text;
        if (!(fields >> time_text)) continue;

        double time_ns = 0.0;
        try {
            std::size_t used = 0;
            time_ns = std::stod(time_text, &used);
            if (used != time_text.size()) throw std::invalid_argument(time_text);
        } catch (const std::exception&) {
            throw ParseError(line_no, fmt::format("bad timestamp '{}'", time_text));
        }
        if (!(time_ns >= 0.0)) throw ParseError(line_no, "timestamp must be non-negative");

        std::string op;
        fields >> op;
        TimedRequest req;
        req.at = time_ns / 1e9;
        std::string word_text;
        try {
            if (op == "SEARCH") {
                if (!(fields >> word_text)) throw ParseError(line_no, "SEARCH needs a ternary key");
                req.op = SearchRequest{TernaryWord::parse(word_text)};
            } else if (op == "WRITE") {
                long long row = -1;
                if (!(fields >> row) || row < 0) throw ParseError(line_no, "WRITE needs a non-negative row index");
                if (!(fields >> word_text)) throw ParseError(line_no, "WRITE needs a ternary word");
                req.op = WriteRequest{static_cast<std::size_t>(row), TernaryWord::parse(word_text)};
            } else {
                throw ParseError(line_no, fmt::format("unknown operation '{}'", op));
            }
        } catch (const ParseError& e) {
            if (e.line() != 0) throw;
            throw ParseError(line_no, e.what());
        }
        std::string extra;
        if (fields >> extra) throw ParseError(line_no, fmt::format("unexpected trailing field '{}'", extra));
        if (!trace.requests.empty() && req.at < trace.requests.back().at) {
            throw ParseError(line_no, "timestamps must be non-decreasing");
        }
        trace.requests.push_back(std::move(req));
    }
    return trace;
}

std::string format_trace(const WorkloadTrace& trace) {
    std::string out;
    for (const auto& r : trace.requests) {
        const double ns = r.at * 1e9;
        if (const auto* s = std::get_if<SearchRequest>(&r.op)) {
            out += fmt::format("{:.17g} SEARCH {}\n", ns, s->key.to_string());
        } else {
            const auto& w = std::get<WriteRequest>(r.op);
            out += fmt::format("{:.17g} WRITE {} {}\n", ns, w.row, w.word.to_string());
        }
    }
    return out;
}

RefreshOutcome one_shot_refresh(TcamArray array, Volts v_r) {
    const ArrayConfig cfg = array.config();
    const RelayParams relay = relay_of(cfg, "one-shot refresh");
    validate_policy(OneShot{v_r, 1.0}, cfg);

    const Seconds cycle = write_cycle_time(cfg);
    for (std::size_t r = 0; r < cfg.rows; ++r) {
        for (std::size_t c = 0; c < cfg.cols; ++c) {
            const auto& cell = std::get<NemCell>(array.cell(r, c));
            array.set_cell(r, c,
                           NemCell{relay_apply_bias(cell.n1, relay, v_r, cycle, cfg.vdd_max),
                                   relay_apply_bias(cell.n2, relay, v_r, cycle, cfg.vdd_max)});
        }
    }
    const double rows = static_cast<double>(cfg.rows);
    const double cols = static_cast<double>(cfg.cols);
    const Joules wl = rows * line_switch_energy(cols * cfg.parasitics.c_wl_per_cell, cfg.vdd);
    const Joules bl = 2.0 * cols * line_switch_energy(rows * cfg.parasitics.c_bl_per_cell, v_r);
    return {std::move(array), wl + bl, cycle, 1};
}

RefreshOutcome row_by_row_refresh(TcamArray array) {
    relay_of(array.config(), "row-by-row refresh");
    RefreshOutcome out{std::move(array), 0.0, 0.0, 0};
    for (std::size_t r = 0; r < out.array.rows(); ++r) {
        const RowRead read = read_row(out.array, r);
        RowWrite write = write_row(std::move(out.array), r, read.word);
        out.array = std::move(write.array);
        out.energy += read.report.energy + write.report.energy;
        out.latency += read.report.latency + write.report.latency;
        ++out.ops;
    }
    return out;
}

Seconds min_safe_period(const RelayParams& params, const RefreshPolicy& policy, double safety_factor) {
    const auto* p = std::get_if<OneShot>(&policy);
    if (p == nullptr) throw NotApplicableError("a safe period is only defined for one-shot refresh");
    if (!(safety_factor > 0.0)) throw ArgumentError("safety factor must be positive");
    return safety_factor * relay_retention_time(params, p->v_r);
}

Watts refresh_average_power(Joules energy_per_refresh, Seconds period) {
    if (!(period > 0.0)) throw ArgumentError("refresh period must be positive");
    return energy_per_refresh / period;
}

RefreshStats simulate_workload(TcamArray array, const WorkloadTrace& trace, const RefreshPolicy& policy,
                               std::optional<Seconds> horizon) {
    validate_policy(policy, array.config());
    trace.validate();
    RefreshStats stats;
    stats.horizon = horizon.value_or(trace.last_time());
    const Seconds period = period_of(policy);

    Seconds now = 0.0;
    Seconds busy_until = 0.0;
    auto advance_to = [&](Seconds t) {
        if (t > now) {
            Elapse e = elapse(std::move(array), t - now);
            array = std::move(e.array);
            stats.data_loss_events += e.losses.size();
            now = t;
        }
    };
    auto run_refresh = [&](Seconds t) {
        advance_to(t);
        RefreshOutcome out = std::holds_alternative<OneShot>(policy)
                                 ? one_shot_refresh(std::move(array), std::get<OneShot>(policy).v_r)
                                 : row_by_row_refresh(std::move(array));
        array = std::move(out.array);
        stats.refresh_ops += out.ops;
        stats.refresh_energy += out.energy;
        busy_until = std::max(busy_until, t) + out.latency;
    };

    std::size_t next_refresh = 1;
    auto refresh_time = [&](std::size_t k) { return static_cast<double>(k) * period; };
    for (const auto& req : trace.requests) {
        // Refreshes scheduled at the same instant as a request start first.
        while (refresh_time(next_refresh) <= req.at && refresh_time(next_refresh) <= stats.horizon) {
            run_refresh(refresh_time(next_refresh++));
        }
        if (req.at > stats.horizon) break;
        ++stats.requests;
        if (req.at < busy_until) {
            ++stats.stalled_requests;
            stats.total_stall_time += busy_until - req.at;
        }
        // Searches leave the array untouched and leakage composes, so leakage only needs
        // bringing up to date before something writes.
        if (const auto* w = std::get_if<WriteRequest>(&req.op)) {
            advance_to(req.at);
            RowWrite rw = write_row(std::move(array), w->row, w->word);
            array = std::move(rw.array);
        } else if (const auto& key = std::get<SearchRequest>(req.op).key; key.size() != array.cols()) {
            throw DimensionError(fmt::format("search key has {} symbols, array has {} columns", key.size(), array.cols()));
        }
    }
    while (refresh_time(next_refresh) <= stats.horizon) run_refresh(refresh_time(next_refresh++));
    advance_to(stats.horizon);
    stats.average_power = stats.horizon > 0.0 ? stats.refresh_energy / stats.horizon : 0.0;
    return stats;
}

}  // namespace tcamsim
