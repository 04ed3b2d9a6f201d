// tcamsim command line.
//
//   tcamsim calibrate [--targets FILE] [--out DIR]          writes DIR/calibration.toml
//   tcamsim bench     [--calibration FILE] [--tech ID]       exit 1 when any target misses
//   tcamsim trace     TRACE [--policy P] [--period T]         refresh/workload statistics
//   tcamsim search    CONTENTS KEY [--timed]                  matching row indices
//
// Array contents files hold one row per line over {0, 1, X}; blank lines and lines starting
// with '#' are ignored, and every row must have the same width. Trace files hold
// "<time_ns> SEARCH <key>" or "<time_ns> WRITE <row> <word>" per line.
//
// Exit codes: 0 success, 1 benchmark target failure, 2 input or configuration error.
// TCAMSIM_LOG=trace|debug|info|warn|error|off sets log verbosity (default warn); logs go to stderr.

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "tcamsim/config.hpp"
#include "tcamsim/errors.hpp"
#include "tcamsim/report_io.hpp"

namespace tcamsim::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config_path;
    std::string targets_path;
    std::string calibration_path;
    std::vector<std::string> techs;
    std::string out_dir;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::string array;

    std::string policy;
    std::string period;
    std::string v_r;
    std::string horizon;

    std::string trace_path;
    std::string contents_path;
    std::string key;
    bool timed = false;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto logger = std::make_shared<spdlog::logger>("tcamsim", std::make_shared<spdlog::sinks::ostream_sink_mt>(err));
    logger->set_pattern("[%l] %v");
    const char* env = std::getenv("TCAMSIM_LOG");
    logger->set_level(env != nullptr ? spdlog::level::from_str(env) : spdlog::level::warn);
    return logger;
}

void require_file(const fs::path& path, std::string_view what) {
    if (!fs::is_regular_file(path)) throw ConfigError(fmt::format("{} '{}' does not exist", what, path.string()));
}

RunConfig build_config(const Options& o) {
    RunConfig cfg;
    if (!o.config_path.empty()) {
        require_file(o.config_path, "config file");
        cfg = load_run_config(o.config_path);
    }
    if (!o.targets_path.empty()) {
        require_file(o.targets_path, "targets file");
        cfg.targets = load_targets(o.targets_path, cfg.targets);
    }
    if (!o.calibration_path.empty()) cfg.calibration_path = o.calibration_path;
    if (cfg.calibration_path) require_file(*cfg.calibration_path, "calibration file");

    if (!o.techs.empty()) {
        cfg.technologies.clear();
        for (const auto& id : o.techs) {
            const auto kind = cell_kind_from_id(id);
            if (!kind) throw ConfigError(fmt::format("unknown technology '{}'", id));
            cfg.technologies.push_back(*kind);
        }
    }
    if (!o.array.empty()) {
        const auto x = o.array.find('x');
        std::size_t rows = 0, cols = 0;
        try {
            if (x == std::string::npos) throw std::invalid_argument("no x");
            std::size_t used = 0;
            rows = std::stoul(o.array.substr(0, x), &used);
            if (used != x) throw std::invalid_argument("rows");
            cols = std::stoul(o.array.substr(x + 1), &used);
            if (used != o.array.size() - x - 1) throw std::invalid_argument("cols");
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("--array expects ROWSxCOLS, got '{}'", o.array));
        }
        cfg.inputs.rows = rows;
        cfg.inputs.cols = cols;
    }
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (!o.format.empty()) cfg.format = o.format;
    if (cfg.format != "csv" && cfg.format != "json") {
        throw ConfigError(fmt::format("unknown format '{}' (expected csv or json)", cfg.format));
    }
    if (o.seed) cfg.seed = *o.seed;

    if (!o.policy.empty()) {
        if (o.policy == "one-shot") cfg.policy = PolicyKind::OneShot;
        else if (o.policy == "row-by-row") cfg.policy = PolicyKind::RowByRow;
        else if (o.policy == "none") cfg.policy = PolicyKind::None;
        else throw ConfigError(fmt::format("unknown policy '{}' (expected none, row-by-row or one-shot)", o.policy));
    }
    try {
        if (!o.period.empty()) cfg.refresh_period = parse_quantity(o.period, Dimension::Time);
        if (!o.v_r.empty()) cfg.inputs.v_r = parse_quantity(o.v_r, Dimension::Voltage);
        if (!o.horizon.empty()) cfg.trace_horizon = parse_quantity(o.horizon, Dimension::Time);
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
    if (!o.trace_path.empty()) cfg.trace_path = o.trace_path;
    if (!o.contents_path.empty()) cfg.contents_path = o.contents_path;
    return cfg;
}

// Writes `text` to DIR/name when an output directory is set, otherwise to `out`.
void emit(const RunConfig& cfg, const std::string& name, const std::string& text, std::ostream& out,
          spdlog::logger& log) {
    if (!cfg.out_dir) {
        out << text;
        return;
    }
    fs::create_directories(*cfg.out_dir);
    const fs::path path = *cfg.out_dir / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
    file << text;
    log.info("wrote {}", path.string());
}

// The quantity a row's target is compared against.
double compared_value(const BenchRow& row) {
    const bool ratio_target = row.metric == "write_energy_ratio" || row.metric.rfind("search_", 0) == 0;
    return ratio_target && row.ratio_vs_3t2n ? *row.ratio_vs_3t2n : row.absolute_value;
}

BenchReport restrict(const BenchReport& report, const RunConfig& cfg) {
    if (cfg.technologies.size() == std::size(kAllCellKinds)) return report;
    BenchReport out;
    for (const BenchRow& r : report.rows) {
        const bool keep = r.technology == "all" ||
                          std::any_of(cfg.technologies.begin(), cfg.technologies.end(),
                                      [&](CellKind k) { return r.technology == cell_kind_id(k); });
        if (keep) out.rows.push_back(r);
    }
    return out;
}

int cmd_calibrate(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    const Calibration cal = calibrate(cfg.targets, cfg.inputs);
    const fs::path dir = cfg.out_dir.value_or(".");
    fs::create_directories(dir);
    const fs::path path = dir / "calibration.toml";
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
    file << calibration_to_toml(cal);
    log.info("wrote {}", path.string());

    out << fmt::format("i_leak {}\n", format_quantity(cal.i_leak, Dimension::Current));
    out << fmt::format("wl_to_bl_ratio {:.6g}\n", cal.wl_to_bl_ratio);
    out << fmt::format("write_driver_r {}\n", format_quantity(cal.write_driver_r, Dimension::Resistance));
    out << fmt::format("rram_switching_cells {}\n", cal.switching_cells[CellKind::Rram2T2R]);
    out << "residuals (model / target - 1):\n";
    for (const BenchRow& r : run_all_benches(cal, cfg.seed).rows) {
        if (!r.paper_target || *r.paper_target == 0.0 || !r.tolerance) continue;
        out << fmt::format("  {:<34} {:<9} {:+.3e}\n", r.metric, r.technology,
                           compared_value(r) / *r.paper_target - 1.0);
    }
    out << fmt::format("wrote {}\n", path.string());
    return kExitOk;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err, spdlog::logger& log) {
    const Calibration cal = resolve_calibration(cfg);
    const BenchReport report = restrict(run_all_benches(cal, cfg.seed), cfg);
    emit(cfg, "bench." + cfg.format, format_report(report, cfg.format), out, log);
    const auto failures = report.failures();
    for (const BenchRow& r : failures) {
        err << fmt::format("FAIL {} {}: {:.6g} vs target {:.6g}\n", r.metric, r.technology, compared_value(r),
                           r.paper_target.value_or(0.0));
    }
    return failures.empty() ? kExitOk : kExitBenchFailure;
}

CellKind single_tech(const RunConfig& cfg) {
    if (cfg.technologies.size() == std::size(kAllCellKinds)) return CellKind::Nem3T2N;
    if (cfg.technologies.size() != 1) throw ConfigError("this command takes a single --tech");
    return cfg.technologies.front();
}

int cmd_trace(const RunConfig& cfg, std::ostream& out, spdlog::logger& log) {
    if (!cfg.trace_path) throw ConfigError("no trace file given");
    require_file(*cfg.trace_path, "trace file");
    std::ifstream in(*cfg.trace_path);
    WorkloadTrace trace;
    try {
        trace = parse_trace(in);
    } catch (const ParseError& e) {
        throw ParseError(0, fmt::format("{}: {}", cfg.trace_path->string(), e.what()));
    }
    const CellKind kind = single_tech(cfg);
    const Calibration cal = resolve_calibration(cfg);
    const ArrayConfig& ac = cal.configs[kind];
    const RefreshPolicy policy = resolve_policy(cfg, cal.relay());
    log.info("policy {}", describe(policy));

    TcamArray array(ac);
    if (cfg.contents_path) {
        require_file(*cfg.contents_path, "contents file");
        std::ifstream contents(*cfg.contents_path);
        array = import_contents(contents, ac);
    }
    const RefreshStats stats = simulate_workload(std::move(array), trace, policy, cfg.trace_horizon);
    const std::string policy_id = cfg.policy == PolicyKind::OneShot    ? "one_shot"
                                  : cfg.policy == PolicyKind::RowByRow ? "row_by_row"
                                                                       : "none";
    const BenchReport report = stats_to_report(stats, cell_kind_id(kind), policy_id);
    emit(cfg, "trace." + cfg.format, format_report(report, cfg.format), out, log);
    return kExitOk;
}

int cmd_search(const RunConfig& cfg, const std::string& key_text, bool timed, std::ostream& out) {
    if (!cfg.contents_path) throw ConfigError("no contents file given");
    require_file(*cfg.contents_path, "contents file");
    const CellKind kind = single_tech(cfg);
    const Calibration cal = resolve_calibration(cfg);
    std::ifstream in(*cfg.contents_path);
    TcamArray array = [&] {
        try {
            return import_contents(in, cal.configs[kind]);
        } catch (const ParseError& e) {
            throw ParseError(0, fmt::format("{}: {}", cfg.contents_path->string(), e.what()));
        }
    }();
    const TernaryWord key = TernaryWord::parse(key_text);
    if (key.size() != array.cols()) {
        throw DimensionError(fmt::format("key has {} symbols, array has {} columns", key.size(), array.cols()));
    }
    if (!timed) {
        const auto matches = search_functional(array, key);
        for (std::size_t r = 0; r < matches.size(); ++r) {
            if (matches[r]) out << r << '\n';
        }
        return kExitOk;
    }
    const TimedSearch s = search_timed(array, key);
    std::optional<Seconds> worst;
    for (std::size_t r = 0; r < s.matches.size(); ++r) {
        if (s.matches[r]) out << r << '\n';
        if (s.settle_times[r]) worst = std::max(worst.value_or(0.0), *s.settle_times[r]);
    }
    out << fmt::format("latency {}\n", format_quantity(s.report.latency, Dimension::Time));
    out << fmt::format("worst_settle {}\n", worst ? format_quantity(*worst, Dimension::Time) : "none");
    out << fmt::format("energy {}\n", format_quantity(s.report.energy, Dimension::Energy));
    return kExitOk;
}

void add_common(CLI::App& app, Options& o) {
    app.add_option("--config", o.config_path, "TOML run configuration");
    app.add_option("--tech", o.techs, "technology id (nem3t2n, sram16t, rram2t2r, fefet2f); repeatable");
    app.add_option("--out", o.out_dir, "output directory");
    app.add_option("--format", o.format, "report format: csv or json");
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--targets", o.targets_path, "calibration targets TOML");
    app.add_option("--calibration", o.calibration_path, "calibration file from `calibrate`");
    app.add_option("--array", o.array, "array dimensions ROWSxCOLS");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto log = make_logger(err);
    Options o;
    CLI::App app{"NEM-relay dynamic TCAM simulator", "tcamsim"};
    app.require_subcommand(1);
    app.fallthrough();
    add_common(app, o);

    auto* calibrate_cmd = app.add_subcommand("calibrate", "fit parasitics to targets and write calibration.toml");
    auto* bench_cmd = app.add_subcommand("bench", "run the write, search and refresh benchmarks");
    auto* trace_cmd = app.add_subcommand("trace", "replay a request trace under a refresh policy");
    trace_cmd->add_option("trace", o.trace_path, "trace file");
    trace_cmd->add_option("--policy", o.policy, "none, row-by-row or one-shot");
    trace_cmd->add_option("--period", o.period, "refresh period, e.g. 9us");
    trace_cmd->add_option("--vr", o.v_r, "one-shot refresh voltage, e.g. 0.5V");
    trace_cmd->add_option("--horizon", o.horizon, "simulated time, e.g. 100us");
    trace_cmd->add_option("--contents", o.contents_path, "initial array contents");
    auto* search_cmd = app.add_subcommand("search", "search stored contents for a key");
    search_cmd->add_option("contents", o.contents_path, "array contents file")->required();
    search_cmd->add_option("key", o.key, "search key over {0, 1, X}")->required();
    search_cmd->add_flag("--timed", o.timed, "also print settle time and energy");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    try {
        const RunConfig cfg = build_config(o);
        if (*calibrate_cmd) return cmd_calibrate(cfg, out, *log);
        if (*bench_cmd) return cmd_bench(cfg, out, err, *log);
        if (*trace_cmd) return cmd_trace(cfg, out, *log);
        if (*search_cmd) return cmd_search(cfg, o.key, o.timed, out);
    } catch (const CalibrationError& e) {
        err << "error: unsatisfiable target " << e.what() << '\n';
        return kExitInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace tcamsim::cli
