#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using tcamsim::cli::run_cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path workdir() {
    const fs::path dir = fs::temp_directory_path() / "tcamsim_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string write(const std::string& name, const std::string& text) {
    const fs::path p = workdir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string value_of(const std::string& csv, const std::string& metric_prefix) {
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind(metric_prefix, 0) == 0) {
            const auto a = line.find(',', line.find(',') + 1);
            return line.substr(a + 1, line.find(',', a + 1) - a - 1);
        }
    }
    return "";
}

}  // namespace

TEST_CASE("calibrate writes a calibration file") {
    const fs::path out = workdir() / "cal";
    const Run r = run({"calibrate", "--out", out.string()});
    REQUIRE(r.code == 0);
    const std::string text = slurp(out / "calibration.toml");
    CHECK(text.find("i_leak = '6.56603") != std::string::npos);
    CHECK(r.out.find("residuals") != std::string::npos);
}

TEST_CASE("missing targets file exits 2 and names the path") {
    const Run r = run({"calibrate", "--targets", "/nonexistent/custom.toml"});
    CHECK(r.code == 2);
    CHECK(r.err.find("/nonexistent/custom.toml") != std::string::npos);
}

TEST_CASE("unsatisfiable target exits 2 naming it") {
    const auto t = write("impossible.toml", "[targets]\nosr_energy = \"1aJ\"\n");
    const Run r = run({"calibrate", "--targets", t});
    CHECK(r.code == 2);
    CHECK(r.err.find("osr_energy") != std::string::npos);
}

TEST_CASE("bench passes by default and is deterministic") {
    const Run a = run({"bench", "--seed", "3"});
    const Run b = run({"bench", "--seed", "3"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("metric,technology,absolute_value,unit,ratio_vs_3t2n,paper_target,tolerance,pass\n", 0) == 0);
    CHECK(a.out.find(",false\n") == std::string::npos);
}

TEST_CASE("bench --tech restricts rows") {
    const Run r = run({"bench", "--tech", "sram16t"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const std::string tech = line.substr(line.find(',') + 1, line.find(',', line.find(',') + 1) - line.find(',') - 1);
        CHECK((tech == "sram16t" || tech == "all"));
    }
}

TEST_CASE("bench json holds the same values as csv") {
    const fs::path dir = workdir() / "fmt";
    REQUIRE(run({"bench", "--out", dir.string(), "--format", "csv"}).code == 0);
    REQUIRE(run({"bench", "--out", dir.string(), "--format", "json"}).code == 0);
    const std::string csv = slurp(dir / "bench.csv");
    const std::string json = slurp(dir / "bench.json");
    const std::string v = value_of(csv, "search_edp,sram16t");
    CHECK_FALSE(v.empty());
    CHECK(json.find("\"absolute_value\": " + v) != std::string::npos);
}

TEST_CASE("custom targets: equal SRAM and 3T2N write energy gives ratio 1") {
    const auto t = write("equal.toml",
                         "[targets.write_energy]\nsram16t = \"0.35pJ\"\n[targets.write_efficiency_ratio]\nsram16t = 1.0\n");
    const Run r = run({"bench", "--targets", t, "--tech", "sram16t"});
    CHECK(r.code == 0);
    CHECK(r.out.find("write_energy_ratio,sram16t,3.5e-13,J,1,1,") != std::string::npos);
}

TEST_CASE("a missed target exits 1 and lists it") {
    const fs::path dir = workdir() / "miss";
    REQUIRE(run({"calibrate", "--out", dir.string()}).code == 0);
    std::string text = slurp(dir / "calibration.toml");
    const auto at = text.find("osr_energy = ");
    REQUIRE(at != std::string::npos);
    text.replace(at, text.find('\n', at) - at, "osr_energy = '600fJ'");
    std::ofstream(dir / "calibration.toml") << text;
    const Run r = run({"bench", "--calibration", (dir / "calibration.toml").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("FAIL osr_energy") != std::string::npos);
}

TEST_CASE("trace subcommand") {
    std::string long_trace;
    for (int i = 0; i <= 200; ++i) long_trace += std::to_string(i * 500) + " SEARCH 0101\n";
    const auto trace = write("long.txt", long_trace);
    const auto contents = write("c4.txt", "0101\n1X10\n0000\n1111\n");

    const Run none = run({"trace", trace, "--policy", "none", "--contents", contents});
    REQUIRE(none.code == 0);
    CHECK(std::stod(value_of(none.out, "data_loss_events_none")) > 0);

    const Run osr = run({"trace", trace, "--policy", "one-shot", "--contents", contents, "--period", "2us"});
    const Run rbr = run({"trace", trace, "--policy", "row-by-row", "--contents", contents, "--period", "2us"});
    REQUIRE(osr.code == 0);
    REQUIRE(rbr.code == 0);
    CHECK(std::stod(value_of(osr.out, "stalled_requests_one_shot")) <=
          std::stod(value_of(rbr.out, "stalled_requests_row_by_row")));
    CHECK(std::stod(value_of(osr.out, "data_loss_events_one_shot")) == 0);

    const Run empty = run({"trace", write("empty.txt", "")});
    CHECK(empty.code == 0);
    CHECK(value_of(empty.out, "requests_one_shot") == "0");

    const Run bad = run({"trace", write("bad.txt", "0 SEARCH 0101\n5 FROB 1\n")});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("line 2") != std::string::npos);

    CHECK(run({"trace", "/nonexistent/trace.txt"}).code == 2);
    CHECK(run({"trace", trace, "--tech", "sram16t"}).code == 2);
}

TEST_CASE("search subcommand") {
    const auto xs = write("xs.txt", "XXXX\nXXXX\nXXXX\n");
    CHECK(run({"search", xs, "0110"}).out == "0\n1\n2\n");

    const auto mixed = write("mixed.txt", "0110\n1111\n0X10\n");
    CHECK(run({"search", mixed, "XXXX"}).out == "0\n1\n2\n");
    CHECK(run({"search", mixed, "0110"}).out == "0\n2\n");

    const auto single = write("single.txt", "01100101\n");
    const Run timed = run({"search", single, "01100100", "--timed"});
    CHECK(timed.code == 0);
    CHECK(timed.out.rfind("latency ", 0) == 0);
    CHECK(timed.out.find("worst_settle ") != std::string::npos);
    CHECK(timed.out.find("worst_settle none") == std::string::npos);

    CHECK(run({"search", single, "0110"}).code == 2);
    CHECK(run({"search", write("ragged.txt", "01\n011\n"), "01"}).code == 2);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"bench", "--format", "xml"}).code == 2);
    CHECK(run({"bench", "--tech", "mtj"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("config file drives the run") {
    const auto cfg = write("cli.toml", "seed = 5\ntechnologies = [\"rram2t2r\"]\n[output]\nformat = \"json\"\n");
    const Run r = run({"bench", "--config", cfg});
    CHECK(r.code == 0);
    CHECK(r.out.front() == '[');
    CHECK(r.out.find("\"sram16t\"") == std::string::npos);
    CHECK(run({"bench", "--config", "/nonexistent/cfg.toml"}).code == 2);
}
