#include <doctest.h>

#include <random>
#include <sstream>

#include "tcamsim/array.hpp"
#include "tcamsim/errors.hpp"

using namespace tcamsim;

namespace {

TernaryWord random_word(std::size_t n, std::mt19937_64& rng, double p_x) {
    std::bernoulli_distribution x(p_x), bit(0.5);
    TernaryWord w(n, TernaryValue::DontCare);
    for (std::size_t i = 0; i < n; ++i) {
        if (!x(rng)) w[i] = bit(rng) ? TernaryValue::One : TernaryValue::Zero;
    }
    return w;
}

TcamArray random_array(const ArrayConfig& cfg, std::mt19937_64& rng, double p_x) {
    TcamArray a(cfg);
    for (std::size_t r = 0; r < cfg.rows; ++r) {
        const auto w = random_word(cfg.cols, rng, p_x);
        for (std::size_t c = 0; c < cfg.cols; ++c) a.set_cell(r, c, encode_ternary(cfg.tech, w[c], cfg.vdd));
    }
    return a;
}

std::vector<bool> brute_force(const TcamArray& a, const TernaryWord& key) {
    std::vector<bool> out;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const TernaryWord stored = a.decode_row(r);
        bool match = true;
        for (std::size_t c = 0; c < key.size(); ++c) {
            const bool care = stored[c] != TernaryValue::DontCare && key[c] != TernaryValue::DontCare;
            if (care && stored[c] != key[c]) match = false;
        }
        out.push_back(match);
    }
    return out;
}

}  // namespace

TEST_CASE("new array is all DontCare and matches everything") {
    const auto cfg = ArrayConfig::defaults(CellKind::Nem3T2N);
    const TcamArray a = new_array(cfg);
    CHECK(a.rows() == 64);
    CHECK(a.cols() == 64);
    for (std::size_t r = 0; r < a.rows(); ++r) CHECK(a.decode_row(r) == TernaryWord(64, TernaryValue::DontCare));
    std::mt19937_64 rng(3);
    const auto m = search_functional(a, random_word(64, rng, 0.0));
    CHECK(std::all_of(m.begin(), m.end(), [](bool b) { return b; }));
}

TEST_CASE("zero dimensions are rejected") {
    CHECK_THROWS_AS(ArrayConfig::defaults(CellKind::Nem3T2N, 0, 64).validate(), DimensionError);
    CHECK_THROWS_AS(new_array(ArrayConfig::defaults(CellKind::Sram16T, 4, 0)), DimensionError);
}

TEST_CASE("TernaryWord parsing") {
    CHECK(TernaryWord::parse("01Xx").to_string() == "01XX");
    CHECK_THROWS_AS(TernaryWord::parse("012"), ParseError);
    CHECK(TernaryWord::parse("0110").definite());
    CHECK_FALSE(TernaryWord::parse("01X0").definite());
}

TEST_CASE("search_functional equals the brute-force matcher") {
    std::mt19937_64 rng(2024);
    for (CellKind k : kAllCellKinds) {
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t rows = 1 + rng() % 24, cols = 1 + rng() % 24;
            const auto cfg = ArrayConfig::defaults(k, rows, cols);
            const TcamArray a = random_array(cfg, rng, 0.3);
            // Keys drawn from stored rows with a few flips, so matches are common.
            TernaryWord key = a.decode_row(rng() % rows);
            for (std::size_t i = 0; i < cols; ++i) {
                if (rng() % 4 == 0) key[i] = static_cast<TernaryValue>(rng() % 3);
            }
            REQUIRE(search_functional(a, key) == brute_force(a, key));
        }
    }
}

TEST_CASE("key width must equal column count") {
    const TcamArray a(ArrayConfig::defaults(CellKind::Nem3T2N, 4, 8));
    CHECK_THROWS_AS(search_functional(a, TernaryWord(7, TernaryValue::One)), DimensionError);
}

TEST_CASE("write_row then search with the same word matches that row") {
    std::mt19937_64 rng(5);
    for (CellKind k : kAllCellKinds) {
        const auto cfg = ArrayConfig::defaults(k, 16, 32);
        TcamArray a = random_array(cfg, rng, 0.0);
        const auto w = random_word(32, rng, 0.0);
        a = write_row(std::move(a), 9, w).array;
        CHECK(a.decode_row(9) == w);
        CHECK(search_functional(a, w)[9]);
    }
}

TEST_CASE("exact and one-bit-off searches") {
    const auto cfg = ArrayConfig::defaults(CellKind::Nem3T2N, 4, 8);
    TcamArray a(cfg);
    const auto w = TernaryWord::parse("01100101");
    a = write_row(std::move(a), 0, w).array;
    for (std::size_t r = 1; r < 4; ++r) a = write_row(std::move(a), r, TernaryWord::parse("11111111")).array;
    CHECK(search_functional(a, w)[0]);
    CHECK_FALSE(search_functional(a, TernaryWord::parse("01100100"))[0]);
    const auto all_x = search_functional(a, TernaryWord(8, TernaryValue::DontCare));
    CHECK(std::all_of(all_x.begin(), all_x.end(), [](bool b) { return b; }));
}

TEST_CASE("rewriting identical contents switches no devices") {
    for (CellKind k : kAllCellKinds) {
        const auto cfg = ArrayConfig::defaults(k, 8, 16);
        std::mt19937_64 rng(9);
        const auto w = random_word(16, rng, 0.2);
        const auto first = write_row(TcamArray(cfg), 2, w);
        const auto second = write_row(first.array, 2, w);
        CHECK(second.devices_switched == 0);
        CHECK(second.report.component("device") == 0.0);
        CHECK(second.report.component("wordline") == doctest::Approx(first.report.component("wordline")));
        CHECK(second.report.component("bitline") == doctest::Approx(first.report.component("bitline")));
    }
}

TEST_CASE("write energy breakdown sums to the total") {
    const auto cfg = ArrayConfig::defaults(CellKind::Rram2T2R);
    std::mt19937_64 rng(1);
    const auto w = write_row(TcamArray(cfg), 0, random_word(64, rng, 0.0));
    double sum = 0.0;
    for (const auto& c : w.report.breakdown) sum += c.energy;
    CHECK(sum == doctest::Approx(w.report.energy).epsilon(1e-12));
    CHECK(w.report.latency == write_cycle_time(cfg));
}

TEST_CASE("timed search agrees with functional search") {
    std::mt19937_64 rng(77);
    for (CellKind k : kAllCellKinds) {
        const auto cfg = ArrayConfig::defaults(k, 32, 32);
        const TcamArray a = random_array(cfg, rng, 0.2);
        for (int i = 0; i < 20; ++i) {
            const auto key = random_word(32, rng, 0.2);
            const auto timed = search_timed(a, key);
            REQUIRE(timed.matches == search_functional(a, key));
            for (std::size_t r = 0; r < a.rows(); ++r) {
                REQUIRE(timed.settle_times[r].has_value() == !timed.matches[r]);
                REQUIRE((timed.mismatch_counts[r] == 0) == timed.matches[r]);
            }
        }
    }
}

TEST_CASE("more mismatches settle faster") {
    const auto cfg = ArrayConfig::defaults(CellKind::Nem3T2N, 2, 8);
    TcamArray a(cfg);
    a = write_row(std::move(a), 0, TernaryWord::parse("00000001")).array;
    a = write_row(std::move(a), 1, TernaryWord::parse("00000011")).array;
    const auto s = search_timed(a, TernaryWord::parse("00000000"));
    REQUIRE(s.mismatch_counts[0] == 1);
    REQUIRE(s.mismatch_counts[1] == 2);
    CHECK(*s.settle_times[1] < *s.settle_times[0]);
    CHECK(s.report.latency == *s.settle_times[0]);
}

TEST_CASE("all-match search spends nothing on matchlines") {
    const auto cfg = ArrayConfig::defaults(CellKind::Nem3T2N, 8, 8);
    const auto s = search_timed(TcamArray(cfg), TernaryWord::parse("01010101"));
    CHECK(s.report.component("matchline") == 0.0);
    CHECK(s.report.component("searchline") > 0.0);
}

TEST_CASE("searchline energy is linear in columns for definite keys") {
    const auto narrow = ArrayConfig::defaults(CellKind::Sram16T, 16, 32);
    const auto wide = ArrayConfig::defaults(CellKind::Sram16T, 16, 64);
    std::mt19937_64 rng(4);
    const auto k32 = random_word(32, rng, 0.0);
    std::vector<TernaryValue> doubled(k32.symbols().begin(), k32.symbols().end());
    doubled.insert(doubled.end(), k32.symbols().begin(), k32.symbols().end());
    const double e32 = search_timed(TcamArray(narrow), k32).report.component("searchline");
    const double e64 = search_timed(TcamArray(wide), TernaryWord(doubled)).report.component("searchline");
    CHECK(e64 == doctest::Approx(2.0 * e32).epsilon(1e-12));
}

TEST_CASE("precharge energy formula") {
    const auto cfg = ArrayConfig::defaults(CellKind::Nem3T2N);
    const TcamArray fresh(cfg);
    const auto full = precharge(fresh);
    const double expected = 64.0 * 64.0 * cfg.parasitics.c_ml_per_cell * 1.0 * 1.0;
    CHECK(full.energy == doctest::Approx(expected).epsilon(1e-12));
    CHECK(precharge(full.array).energy == 0.0);

    TcamArray one = full.array;
    one.set_matchline(5, 0.0);
    CHECK(precharge(one).energy == doctest::Approx(expected / 64.0).epsilon(1e-12));
}

TEST_CASE("elapse: retention losses") {
    const auto cfg = ArrayConfig::defaults(CellKind::Nem3T2N, 8, 8);
    std::mt19937_64 rng(8);
    TcamArray a(cfg);
    std::size_t definite = 0;
    for (std::size_t r = 0; r < 8; ++r) {
        const auto w = random_word(8, rng, 0.25);
        for (std::size_t c = 0; c < 8; ++c) definite += w[c] != TernaryValue::DontCare;
        a = write_row(std::move(a), r, w).array;
    }
    CHECK(elapse(a, 1e-6).losses.empty());
    CHECK(elapse(a, 26.5e-6).losses.size() == definite);
    CHECK(elapse(TcamArray(cfg), 1.0).losses.empty());
}

TEST_CASE("elapse composes") {
    const auto cfg = ArrayConfig::defaults(CellKind::Nem3T2N, 8, 8);
    std::mt19937_64 rng(12);
    TcamArray a(cfg);
    for (std::size_t r = 0; r < 8; ++r) a = write_row(std::move(a), r, random_word(8, rng, 0.25)).array;
    for (auto [t1, t2] : {std::pair{3e-6, 5e-6}, std::pair{20e-6, 10e-6}, std::pair{26e-6, 0.4e-6}}) {
        const auto whole = elapse(a, t1 + t2);
        const auto first = elapse(a, t1);
        const auto second = elapse(first.array, t2);
        auto split = first.losses;
        split.insert(split.end(), second.losses.begin(), second.losses.end());
        CHECK(whole.losses == split);
        for (std::size_t r = 0; r < 8; ++r) {
            for (std::size_t c = 0; c < 8; ++c) {
                const auto& x = std::get<NemCell>(whole.array.cell(r, c));
                const auto& y = std::get<NemCell>(second.array.cell(r, c));
                CHECK(x.n1.position == y.n1.position);
                CHECK(x.n2.position == y.n2.position);
                CHECK(x.n1.v_gb == doctest::Approx(y.n1.v_gb).epsilon(1e-9));
                CHECK(x.n2.v_gb == doctest::Approx(y.n2.v_gb).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("contents export/import round trip") {
    std::mt19937_64 rng(31);
    const auto cfg = ArrayConfig::defaults(CellKind::Fefet2F, 12, 20);
    const TcamArray a = random_array(cfg, rng, 0.3);
    std::istringstream in("# saved\n\n" + export_contents(a));
    const TcamArray b = import_contents(in, ArrayConfig::defaults(CellKind::Fefet2F));
    CHECK(b.rows() == 12);
    CHECK(b.cols() == 20);
    for (int i = 0; i < 20; ++i) {
        const auto key = random_word(20, rng, 0.1);
        CHECK(search_functional(a, key) == search_functional(b, key));
    }
}

TEST_CASE("contents import reports the offending line") {
    std::istringstream ragged("0101\n01\n");
    try {
        (void)import_contents(ragged, ArrayConfig::defaults(CellKind::Nem3T2N));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream bad("01\n0a\n");
    CHECK_THROWS_AS(import_contents(bad, ArrayConfig::defaults(CellKind::Nem3T2N)), ParseError);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(import_contents(empty, ArrayConfig::defaults(CellKind::Nem3T2N)), ParseError);
}
