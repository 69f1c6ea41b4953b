#include "moonvol/error.hpp"
#include "moonvol/market_data.hpp"

#include <doctest.h>

#include <functional>
#include <random>
#include <sstream>

using namespace moonvol;

namespace {

std::vector<OhlcBar> ohlc(const std::string& text) {
    std::istringstream in(text);
    return parse_ohlc_csv(in);
}

std::vector<TweetRecord> tweets(const std::string& text) {
    std::istringstream in(text);
    return parse_tweets_jsonl(in);
}

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

const Date kMon{2021, 2, 1}, kTue{2021, 2, 2}, kSat{2021, 1, 30};

}  // namespace

TEST_CASE("ohlc parsing") {
    const auto bars = ohlc("date,open,high,low,close\n2021-01-27,354.83,380.00,249.00,347.51\n");
    REQUIRE(bars.size() == 1);
    CHECK(bars[0].open == 354.83);
    CHECK(bars[0].date == Date{2021, 1, 27});

    const auto sorted = ohlc("date,open,high,low,close\n2021-01-28,1,2,1,1\n2021-01-27,1,2,1,1\n");
    CHECK(sorted[0].date < sorted[1].date);

    const auto bad = error_of([] { ohlc("date,open,high,low,close\n2021-01-27,95,90,100,95\n"); });
    CHECK(bad.find("high < low at line 2") != std::string::npos);

    const auto dup = error_of([] { ohlc("date,open,high,low,close\n2021-01-27,1,2,1,1\n2021-01-27,1,2,1,1\n"); });
    CHECK(dup.find("duplicate date") != std::string::npos);

    const auto malformed = error_of([] { ohlc("date,open,high,low,close\n2021-01-27,1,abc,1,1\n"); });
    CHECK(malformed.find("line 2") != std::string::npos);
    CHECK_THROWS_AS(ohlc("date,open,high,low\n"), ParseError);
    CHECK_THROWS_AS(ohlc("date,open,high,low,close\n2021-01-27,-1,2,1,1\n"), DataError);
}

TEST_CASE("ohlc round trip") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::vector<OhlcBar> bars;
    for (int i = 0; i < 200; ++i) {
        const double o = 100 * u(gen), c = 100 * u(gen);
        bars.push_back({Date{2020, 1, 1} + i, o, std::max(o, c) * u(gen) * 2, std::min(o, c) / (u(gen) * 2), c});
        if (!check_bar(bars.back()).empty()) bars.pop_back();
    }
    std::stringstream ss;
    write_ohlc_csv(ss, bars);
    CHECK(parse_ohlc_csv(ss) == bars);
}

TEST_CASE("tweet jsonl parsing") {
    const auto one = tweets(R"({"id":"1","created_at":"2021-01-27T14:00:00Z","text":"GME to the moon","has_media":false,"is_retweet":false})"
                            "\n");
    REQUIRE(one.size() == 1);
    CHECK(one[0].text == "GME to the moon");
    CHECK(one[0].metrics.total() == 0);

    CHECK(tweets("").empty());

    const auto missing = error_of([] { tweets("{\"id\":\"1\",\"created_at\":\"2021-01-27T14:00:00Z\"}\n"); });
    CHECK(missing.find("text") != std::string::npos);
    CHECK(missing.find("line 1") != std::string::npos);

    const auto garbage = error_of([] {
        tweets("{\"id\":\"1\",\"created_at\":\"2021-01-27T14:00:00Z\",\"text\":\"a\"}\n{oops\n");
    });
    CHECK(garbage.find("line 2") != std::string::npos);

    CHECK_THROWS_AS(tweets(R"({"id":"1","created_at":"2021-01-27T14:00:00Z","text":"a","public_metrics":{"like_count":-1}})"),
                    ParseError);

    const auto ordered = tweets(R"({"id":"b","created_at":"2021-01-27T15:00:00Z","text":"late"})"
                                "\n"
                                R"({"id":"a","created_at":"2021-01-27T14:00:00Z","text":"early","public_metrics":{"like_count":3}})"
                                "\n"
                                R"({"id":"a","created_at":"2021-01-27T14:00:00Z","text":"early"})"
                                "\n");
    REQUIRE(ordered.size() == 2);
    CHECK(ordered[0].id == "a");
    CHECK(ordered[0].metrics.like_count == 3);

    std::stringstream ss;
    write_tweets_jsonl(ss, ordered);
    CHECK(parse_tweets_jsonl(ss) == ordered);
}

TEST_CASE("sentiment filter") {
    TweetRecord media, plain, retweet;
    media.id = "m";
    media.has_media = true;
    plain.id = "p";
    retweet.id = "r";
    retweet.is_retweet = true;

    const auto out = filter_for_sentiment({media, plain});
    REQUIRE(out.size() == 1);
    CHECK(out[0].id == "p");
    CHECK(filter_for_sentiment({plain, plain}).size() == 2);
    CHECK(filter_for_sentiment({retweet, retweet}).empty());

    const std::vector<TweetRecord> mixed = {media, plain, retweet, plain};
    CHECK(filter_for_sentiment(filter_for_sentiment(mixed)) == filter_for_sentiment(mixed));
}

TEST_CASE("calendar alignment") {
    const TradingCalendar cal({kMon, kTue});
    const ExogenousSeries s{SeriesName::yolo1, {{kSat, 9}, {kMon, 1}, {kTue, 2}}};
    const auto a = align_to_calendar(s, cal);
    CHECK(a.points == std::vector<std::pair<Date, double>>{{kMon, 1}, {kTue, 2}});

    const ExogenousSeries only_mon{SeriesName::m, {{kMon, 1}}};
    CHECK(align_to_calendar(only_mon, cal).points == std::vector<std::pair<Date, double>>{{kMon, 1}, {kTue, 1}});

    const ExogenousSeries only_tue{SeriesName::vix, {{kTue, 2}}};
    const auto err = error_of([&] { align_to_calendar(only_tue, cal); });
    CHECK(err.find("2021-02-01") != std::string::npos);

    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Date> days;
        for (Date d{2021, 1, 4}; d < Date{2021, 4, 1}; d = d.next())
            if (gen() % 3) days.push_back(d);
        ExogenousSeries series{SeriesName::m, {{Date{2021, 1, 1}, 0.0}}};
        for (Date d{2021, 1, 2}; d < Date{2021, 4, 5}; d = d.next())
            if (gen() % 2) series.points.emplace_back(d, static_cast<double>(gen() % 100));
        CHECK(align_to_calendar(series, TradingCalendar(days)).points.size() == days.size());
    }
}

TEST_CASE("exogenous and calendar files") {
    std::istringstream good("date,value\n2021-02-01,1.5\n2021-02-02,2\n");
    const auto s = parse_exogenous_csv(good, SeriesName::vix);
    CHECK(s.points.size() == 2);
    std::istringstream backwards("date,value\n2021-02-02,1.5\n2021-02-01,2\n");
    CHECK_THROWS_AS(parse_exogenous_csv(backwards, SeriesName::vix), DataError);

    std::istringstream cal("# holidays removed\n2021-02-01\n\n2021-02-02\n");
    CHECK(parse_calendar(cal).size() == 2);
    CHECK_THROWS_AS(TradingCalendar({kTue, kMon}), DataError);
    CHECK(parse_series_name("YOLO2") == SeriesName::yolo2);
    CHECK_THROWS_AS(parse_series_name("NOPE"), Error);
}
