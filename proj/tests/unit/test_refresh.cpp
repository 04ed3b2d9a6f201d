#include <doctest.h>

#include <random>
#include <sstream>

#include "tcamsim/errors.hpp"
#include "tcamsim/refresh.hpp"

using namespace tcamsim;

namespace {

TernaryWord random_word(std::size_t n, std::mt19937_64& rng) {
    TernaryWord w(n, TernaryValue::DontCare);
    for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<TernaryValue>(rng() % 3);
    return w;
}

TcamArray written_array(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    TcamArray a(ArrayConfig::defaults(CellKind::Nem3T2N, rows, cols));
    for (std::size_t r = 0; r < rows; ++r) a = write_row(std::move(a), r, random_word(cols, rng)).array;
    return a;
}

WorkloadTrace uniform_searches(std::size_t n, Seconds spacing, std::size_t cols, std::mt19937_64& rng) {
    WorkloadTrace t;
    for (std::size_t i = 0; i < n; ++i) t.requests.push_back({static_cast<double>(i) * spacing, SearchRequest{random_word(cols, rng)}});
    return t;
}

}  // namespace

TEST_CASE("one-shot refresh leaves positions and contents alone") {
    std::mt19937_64 rng(1);
    const RelayParams relay;
    std::uniform_real_distribution<double> vr(relay.v_po + 1e-6, relay.v_pi - 1e-6);
    for (int trial = 0; trial < 30; ++trial) {
        TcamArray a = written_array(16, 16, rng);
        a = elapse(std::move(a), std::uniform_real_distribution<double>(0.0, 10e-6)(rng)).array;
        const auto out = one_shot_refresh(a, vr(rng));
        for (std::size_t r = 0; r < 16; ++r) {
            REQUIRE(out.array.decode_row(r) == a.decode_row(r));
            for (std::size_t c = 0; c < 16; ++c) {
                const auto& before = std::get<NemCell>(a.cell(r, c));
                const auto& after = std::get<NemCell>(out.array.cell(r, c));
                REQUIRE(before.n1.position == after.n1.position);
                REQUIRE(before.n2.position == after.n2.position);
            }
        }
        CHECK(out.ops == 1);
    }
}

TEST_CASE("one-shot refresh restores the gate to v_r") {
    std::mt19937_64 rng(2);
    TcamArray a = written_array(4, 4, rng);
    a = elapse(std::move(a), 15e-6).array;
    const auto out = one_shot_refresh(a, 0.5);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            const auto& cell = std::get<NemCell>(out.array.cell(r, c));
            CHECK(cell.n1.v_gb == 0.5);
            CHECK(cell.n2.v_gb == 0.5);
        }
    }
}

TEST_CASE("one-shot refresh voltage must be inside the window") {
    const TcamArray a(ArrayConfig::defaults(CellKind::Nem3T2N, 4, 4));
    CHECK_THROWS_AS(one_shot_refresh(a, 0.6), PolicyError);
    CHECK_THROWS_AS(one_shot_refresh(a, 0.1), PolicyError);
    CHECK_THROWS_AS(validate_policy(OneShot{0.5, 1e-6}, ArrayConfig::defaults(CellKind::Sram16T)), PolicyError);
    CHECK_THROWS_AS(validate_policy(RowByRow{0.0}, ArrayConfig::defaults(CellKind::Nem3T2N)), PolicyError);
}

TEST_CASE("row-by-row refresh costs one op per row and preserves contents") {
    std::mt19937_64 rng(3);
    const TcamArray a = written_array(64, 16, rng);
    const auto out = row_by_row_refresh(elapse(a, 20e-6).array);
    CHECK(out.ops == 64);
    for (std::size_t r = 0; r < 64; ++r) CHECK(out.array.decode_row(r) == a.decode_row(r));
    CHECK(elapse(out.array, 20e-6).losses.empty());
}

TEST_CASE("min_safe_period") {
    const RelayParams relay;
    CHECK(min_safe_period(relay, OneShot{0.5, 1.0}) == doctest::Approx(0.8 * 11.27e-6).epsilon(0.005));
    CHECK(min_safe_period(relay, OneShot{0.5, 1.0}, 1.0) == relay_retention_time(relay, 0.5));
    CHECK(min_safe_period(relay, OneShot{relay.v_po + 1e-9, 1.0}) < 1e-12);
    CHECK_THROWS_AS(min_safe_period(relay, RowByRow{1e-6}), NotApplicableError);
    CHECK_THROWS_AS(min_safe_period(relay, NoRefresh{}), NotApplicableError);
}

TEST_CASE("refresh average power") {
    CHECK(refresh_average_power(520e-15, 26.5e-6) == doctest::Approx(19.6e-9).epsilon(0.01));
    CHECK(refresh_average_power(0.0, 1e-6) == 0.0);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        const double e = std::uniform_real_distribution<double>(1e-15, 1e-9)(rng);
        const double t = std::uniform_real_distribution<double>(1e-9, 1e-3)(rng);
        CHECK(refresh_average_power(e, t) * t == doctest::Approx(e).epsilon(1e-15));
    }
}

TEST_CASE("refresh counts: K periods give K one-shot ops and 64K row ops") {
    std::mt19937_64 rng(5);
    const TcamArray a = written_array(64, 16, rng);
    const Seconds period = 9e-6;
    for (std::size_t k : {1u, 3u, 7u}) {
        const auto trace = uniform_searches(50 * k, period / 50.0, 16, rng);
        const Seconds horizon = static_cast<double>(k) * period;
        CHECK(simulate_workload(a, trace, OneShot{0.5, period}, horizon).refresh_ops == k);
        CHECK(simulate_workload(a, trace, RowByRow{period}, horizon).refresh_ops == 64 * k);
    }
}

TEST_CASE("stall ordering on random traces") {
    std::mt19937_64 rng(6);
    const TcamArray a = written_array(64, 16, rng);
    for (int trial = 0; trial < 20; ++trial) {
        WorkloadTrace t;
        double now = 0.0;
        std::exponential_distribution<double> gap(1.0 / 20e-9);
        for (int i = 0; i < 400; ++i) {
            now += gap(rng);
            t.requests.push_back({now, SearchRequest{random_word(16, rng)}});
        }
        const Seconds period = std::uniform_real_distribution<double>(0.5e-6, 4e-6)(rng);
        const auto osr = simulate_workload(a, t, OneShot{0.5, period});
        const auto rbr = simulate_workload(a, t, RowByRow{period});
        CHECK(osr.stalled_requests <= rbr.stalled_requests);
        CHECK(osr.total_stall_time <= rbr.total_stall_time);
    }
}

TEST_CASE("data safety at the safe period, loss without refresh") {
    std::mt19937_64 rng(7);
    const TcamArray a = written_array(16, 16, rng);
    const RelayParams relay;
    const Seconds safe = min_safe_period(relay, OneShot{0.5, 1.0});
    const auto trace = uniform_searches(200, 0.5e-6, 16, rng);  // 100 us
    CHECK(simulate_workload(a, trace, OneShot{0.5, safe}).data_loss_events == 0);
    CHECK(simulate_workload(a, trace, NoRefresh{}).data_loss_events > 0);
    CHECK(simulate_workload(a, trace, RowByRow{safe}).data_loss_events == 0);
}

TEST_CASE("empty trace") {
    const TcamArray a(ArrayConfig::defaults(CellKind::Nem3T2N, 8, 8));
    const auto none = simulate_workload(a, WorkloadTrace{}, OneShot{0.5, 1e-6});
    CHECK(none.requests == 0);
    CHECK(none.stalled_requests == 0);
    CHECK(none.refresh_ops == 0);
    const auto some = simulate_workload(a, WorkloadTrace{}, OneShot{0.5, 1e-6}, 5e-6);
    CHECK(some.refresh_ops == 5);
    CHECK(some.stalled_requests == 0);
    CHECK(some.refresh_energy > 0.0);
}

TEST_CASE("writes in a trace update contents") {
    const TcamArray a(ArrayConfig::defaults(CellKind::Nem3T2N, 4, 4));
    std::istringstream text("0 WRITE 2 0110\n10 SEARCH 0110\n");
    const auto trace = parse_trace(text);
    const auto stats = simulate_workload(a, trace, NoRefresh{});
    CHECK(stats.requests == 2);
}

TEST_CASE("trace parsing") {
    std::istringstream ok("# header\n0 SEARCH 01X\n\n12.5 WRITE 3 110  # trailing comment\n");
    const auto t = parse_trace(ok);
    REQUIRE(t.requests.size() == 2);
    CHECK(t.requests[1].at == doctest::Approx(12.5e-9));
    CHECK(std::get<WriteRequest>(t.requests[1].op).row == 3);

    std::istringstream round(format_trace(t));
    const auto again = parse_trace(round);
    REQUIRE(again.requests.size() == 2);
    CHECK(again.requests[1].at == doctest::Approx(t.requests[1].at).epsilon(1e-15));

    auto line_of = [](const std::string& s) -> std::size_t {
        std::istringstream in(s);
        try {
            (void)parse_trace(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("0 SEARCH 01\nabc SEARCH 01\n") == 2);
    CHECK(line_of("0 SEARCH 01\n1 READ 01\n") == 2);
    CHECK(line_of("0 SEARCH 01 extra\n") == 1);
    CHECK(line_of("5 SEARCH 01\n1 SEARCH 01\n") == 2);
    CHECK(line_of("0 WRITE x 01\n") == 1);
    CHECK(line_of("0 SEARCH 0z\n") == 1);
}

TEST_CASE("describe policies") {
    CHECK(describe(NoRefresh{}).find("none") != std::string::npos);
    CHECK_FALSE(describe(OneShot{0.5, 9e-6}).empty());
    CHECK_FALSE(describe(RowByRow{9e-6}).empty());
}
