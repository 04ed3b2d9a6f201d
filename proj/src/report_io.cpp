#include "tcamsim/report_io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include "tcamsim/errors.hpp"

namespace tcamsim {

namespace {

std::string num(double v) { return fmt::format("{:.10g}", v); }

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

nlohmann::ordered_json opt_json(const std::optional<double>& v) {
    // Round through the CSV text so both formats agree digit for digit.
    return v ? nlohmann::ordered_json(std::stod(num(*v))) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string report_to_csv(const BenchReport& report) {
    std::string out = "metric,technology,absolute_value,unit,ratio_vs_3t2n,paper_target,tolerance,pass\n";
    for (const BenchRow& r : report.rows) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(r.metric), csv_field(r.technology),
                           num(r.absolute_value), csv_field(r.unit), opt_num(r.ratio_vs_3t2n),
                           opt_num(r.paper_target), opt_num(r.tolerance), r.pass ? "true" : "false");
    }
    return out;
}

std::string report_to_json(const BenchReport& report) {
    auto rows = nlohmann::ordered_json::array();
    for (const BenchRow& r : report.rows) {
        nlohmann::ordered_json row;
        row["metric"] = r.metric;
        row["technology"] = r.technology;
        row["absolute_value"] = std::stod(num(r.absolute_value));
        row["unit"] = r.unit;
        row["ratio_vs_3t2n"] = opt_json(r.ratio_vs_3t2n);
        row["paper_target"] = opt_json(r.paper_target);
        row["tolerance"] = opt_json(r.tolerance);
        row["pass"] = r.pass;
        rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
}

std::string format_report(const BenchReport& report, std::string_view format) {
    if (format == "csv") return report_to_csv(report);
    if (format == "json") return report_to_json(report);
    throw ArgumentError(fmt::format("unknown report format '{}' (expected csv or json)", format));
}

BenchReport stats_to_report(const RefreshStats& stats, std::string_view technology, std::string_view policy) {
    BenchReport rep;
    const std::string tech(technology);
    auto add = [&](std::string_view name, double value, std::string unit) {
        rep.rows.push_back(BenchRow{fmt::format("{}_{}", name, policy), tech, value, std::move(unit),
                                    std::nullopt, std::nullopt, std::nullopt, true});
    };
    add("horizon", stats.horizon, "s");
    add("requests", static_cast<double>(stats.requests), "count");
    add("refresh_ops", static_cast<double>(stats.refresh_ops), "count");
    add("refresh_energy", stats.refresh_energy, "J");
    add("average_power", stats.average_power, "W");
    add("stalled_requests", static_cast<double>(stats.stalled_requests), "count");
    add("total_stall_time", stats.total_stall_time, "s");
    add("data_loss_events", static_cast<double>(stats.data_loss_events), "count");
    return rep;
}

}  // namespace tcamsim
