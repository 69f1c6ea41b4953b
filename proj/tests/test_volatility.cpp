#include "oracle.hpp"

#include "moonvol/error.hpp"
#include "moonvol/volatility.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace moonvol;

namespace {

const OhlcBar kWorked{Date{2021, 1, 27}, 100.0, 110.0, 95.0, 105.0};

OhlcBar random_bar(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> price(1.0, 500.0), up(0.001, 0.1), down(-0.1, -0.001), unit(0.0, 1.0);
    const double o = price(gen);
    const double h = up(gen), l = down(gen);
    const double c = l + (h - l) * unit(gen);
    OhlcBar bar{Date{2021, 1, 4}, o, o * std::exp(h), o * std::exp(l), o * std::exp(c)};
    bar.close = std::clamp(bar.close, bar.low, bar.high);
    return bar;
}

}  // namespace

TEST_CASE("log ranges of the worked bar") {
    const auto r = log_ranges(kWorked);
    CHECK(r.h == doctest::Approx(0.0953102).epsilon(1e-6));
    CHECK(r.l == doctest::Approx(-0.0512933).epsilon(1e-6));
    CHECK(r.c == doctest::Approx(0.0487902).epsilon(1e-6));
    CHECK(r.j == 0.0);
}

TEST_CASE("flat bar and overnight gap") {
    const auto flat = log_ranges({Date{2021, 1, 4}, 100, 100, 100, 100});
    CHECK(flat.h == 0.0);
    CHECK(flat.l == 0.0);
    CHECK(flat.c == 0.0);

    const auto gap = log_ranges({Date{2021, 1, 5}, 102, 103, 101, 102}, 100.0);
    CHECK(gap.j == doctest::Approx(3.92144e-4).epsilon(1e-5));
    const double ln = std::log(1.02);
    CHECK(gap.j == doctest::Approx(ln * ln).epsilon(1e-14));
}

TEST_CASE("parkinson examples") {
    CHECK(parkinson(log_ranges(kWorked)) == doctest::Approx(0.0077518).epsilon(1e-5));
    CHECK(parkinson({}) == 0.0);
    CHECK(parkinson({0.1, 0.0, 0.0, 0.0}) == doctest::Approx(0.0036067).epsilon(1e-4));
}

TEST_CASE("garman-klass examples") {
    CHECK(garman_klass(log_ranges(kWorked)) == doctest::Approx(0.0098444).epsilon(1e-5));
    CHECK(garman_klass({}) == 0.0);
    CHECK(garman_klass({0.02, -0.02, 0.0, 0.0}) == doctest::Approx(8.024e-4).epsilon(1e-12));
}

TEST_CASE("rogers-satchell forms") {
    const auto r = log_ranges(kWorked);
    CHECK(rogers_satchell(r) == doctest::Approx(0.0095674).epsilon(1e-5));
    CHECK(rogers_satchell(r, RsForm::paper_minus) == doctest::Approx(-0.00069978).epsilon(1e-4));
    CHECK(rogers_satchell({}) == 0.0);
    // close at the high: first term vanishes
    const LogRanges at_high{0.05, -0.03, 0.05, 0.0};
    CHECK(rogers_satchell(at_high) == doctest::Approx(0.03 * 0.08).epsilon(1e-12));
}

TEST_CASE("composite and log volatility") {
    const auto v = log_volatility(log_ranges(kWorked));
    CHECK(v.composite == doctest::Approx(0.0090546).epsilon(1e-5));
    CHECK(v.log_vol == doctest::Approx(10.0353).epsilon(1e-5));

    CHECK_THROWS_AS(log_volatility(log_ranges({Date{2021, 1, 4}, 100, 100, 100, 100})), DegenerateBarError);

    // composite = 1/(100^2 * 252) gives log_vol = 0: use a pure-Parkinson-shaped input
    // scaled so that the three-estimator mean hits the target.
    const LogRanges unit{0.01, -0.01, 0.0, 0.0};
    const double base = log_volatility(unit).composite;
    const double scale = std::sqrt(1.0 / (100.0 * 100.0 * 252.0) / base);
    const LogRanges scaled{0.01 * scale, -0.01 * scale, 0.0, 0.0};
    CHECK(std::fabs(log_volatility(scaled).log_vol) < 1e-12);
}

TEST_CASE("overnight term is optional") {
    const auto r = log_ranges({Date{2021, 1, 5}, 102, 104, 101, 103}, 100.0);
    const auto without = log_volatility(r);
    VolatilityOptions opts;
    opts.include_overnight = true;
    const auto with = log_volatility(r, opts);
    CHECK(with.composite == doctest::Approx(without.composite + r.j).epsilon(1e-15));
}

TEST_CASE("scale invariance") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 200; ++i) {
        const auto bar = random_bar(gen);
        const double k = std::ldexp(1.0, static_cast<int>(gen() % 21) - 10);  // exact power of two
        const OhlcBar scaled{bar.date, bar.open * k, bar.high * k, bar.low * k, bar.close * k};
        const auto a = log_volatility(log_ranges(bar));
        const auto b = log_volatility(log_ranges(scaled));
        CHECK(a.composite == b.composite);
        CHECK(a.log_vol == b.log_vol);

        const double k2 = 3.7;
        const OhlcBar scaled2{bar.date, bar.open * k2, bar.high * k2, bar.low * k2, bar.close * k2};
        const auto c = log_volatility(log_ranges(scaled2));
        CHECK(c.log_vol == doctest::Approx(a.log_vol).epsilon(1e-9));
    }
}

TEST_CASE("non-negativity of parkinson and plus-form rogers-satchell") {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 1000; ++i) {
        const auto r = log_ranges(random_bar(gen));
        CHECK(parkinson(r) >= 0.0);
        CHECK(rogers_satchell(r) >= 0.0);
    }
}

TEST_CASE("estimators agree with the arbitrary-precision oracle") {
    std::mt19937_64 gen(2021);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const auto bar = random_bar(gen);
        const auto want = oracle::estimators(bar.open, bar.high, bar.low, bar.close);
        const auto got = log_volatility(log_ranges(bar));
        for (double e : {oracle::rel_error(got.parkinson, want.parkinson),
                         oracle::rel_error(got.garman_klass, want.garman_klass),
                         oracle::rel_error(got.rogers_satchell, want.rogers_satchell),
                         oracle::rel_error(got.log_vol, want.log_vol)})
            worst = std::max(worst, e);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("volatility series drops degenerate bars and chains closes") {
    const std::vector<OhlcBar> bars = {{Date{2021, 1, 4}, 100, 104, 99, 102},
                                       {Date{2021, 1, 5}, 101, 101, 101, 101},
                                       {Date{2021, 1, 6}, 103, 105, 102, 104}};
    VolatilityOptions opts;
    opts.include_overnight = true;
    const auto s = volatility_series(bars, opts);
    REQUIRE(s.days.size() == 3);  // the overnight gap keeps the flat bar positive
    REQUIRE(s.dropped.empty());

    const auto plain = volatility_series(bars);
    REQUIRE(plain.days.size() == 2);
    REQUIRE(plain.dropped.size() == 1);
    CHECK(plain.dropped[0].date == Date{2021, 1, 5});
    // third bar's overnight term uses the flat bar's close
    const auto r = log_ranges(bars[2], 101.0);
    CHECK(s.days[2].variance.composite ==
          doctest::Approx(log_volatility(r, opts).composite).epsilon(1e-15));
}
