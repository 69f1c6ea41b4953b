#pragma once

#include "moonvol/market_data.hpp"

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace moonvol {

/// Where activity on a non-trading date is credited.
enum class MergeDirection {
    previous,  ///< most recent preceding trading day
    next,      ///< next trading day
};

enum class LogBase { e, ten };

/// Per-day sentiment aggregation. `std_dev` is the MOON2 definition.
enum class Aggregator { std_dev, mean, weighted, ratio };

struct DropEntry {
    Date date;
    std::string column;
    std::string reason;

    friend bool operator==(const DropEntry&, const DropEntry&) = default;
};

using DropLog = std::vector<DropEntry>;

/// Per-trading-day values plus the days that could not be computed.
struct DailySeries {
    std::map<Date, double> values;
    DropLog drops;
};

/// Trading day that absorbs calendar date `d`. Dates before the calendar go to the
/// first trading day and dates after it to the last.
Date assign_trading_day(Date d, const TradingCalendar& calendar, MergeDirection direction = MergeDirection::previous);

/// Trading day -> indices into `records`. Every trading day has an entry (possibly empty).
using DayBuckets = std::map<Date, std::vector<std::size_t>>;

/// Buckets tweets by exchange-local date, merging non-trading dates per `direction`.
DayBuckets bucket_by_day(const std::vector<TweetRecord>& records, const TradingCalendar& calendar,
                         MergeDirection direction = MergeDirection::previous);

/// Tweet count per exchange-local calendar date.
std::map<Date, std::size_t> daily_counts(const std::vector<TweetRecord>& records);

/// MOON1: log of the mean daily count over each trading day's merge window
/// (the trading day together with the non-trading dates it absorbs).
DailySeries moon1(const std::map<Date, std::size_t>& counts, const TradingCalendar& calendar,
                  MergeDirection direction = MergeDirection::previous, LogBase base = LogBase::e);

/// MOON2: population standard deviation of the pooled ternary scores per day.
DailySeries moon2(const std::map<Date, std::vector<int>>& buckets);

struct ScoredTweet {
    int ternary = 0;
    double compound = 0.0;
    std::uint64_t engagement = 0;  ///< likes + retweets + quotes + replies
};

/// Generalized MOON2 with the alternative aggregators:
/// mean compound, engagement-weighted mean compound (weight 1 + engagement), share of positive tweets.
DailySeries aggregate_sentiment(const std::map<Date, std::vector<ScoredTweet>>& buckets, Aggregator aggregator);

struct DailySignalRow {
    Date date;
    double v = 0.0;
    double moon1 = 0.0;
    double moon2 = 0.0;
    double yolo1 = 0.0;
    double yolo2 = 0.0;
    double m = 0.0;
    double vix = 0.0;

    friend bool operator==(const DailySignalRow&, const DailySignalRow&) = default;
};

struct SignalTable {
    std::vector<DailySignalRow> rows;
    DropLog drops;  ///< one entry per omitted trading day
};

/// Joins the per-day columns over `calendar`. `exogenous` must contain VIX, M,
/// YOLO1 and YOLO2 already aligned to the calendar. Days missing any column are
/// omitted and logged, with reasons taken from `upstream` where available.
/// Throws DataError when no day survives.
SignalTable assemble_table(const TradingCalendar& calendar, const std::map<Date, double>& v,
                           const std::map<Date, double>& moon1_values, const std::map<Date, double>& moon2_values,
                           const std::vector<ExogenousSeries>& exogenous, const DropLog& upstream = {});

/// x -> (x - min) / (max - min). Throws DataError on a constant (or empty) series.
std::vector<double> normalize_unit_interval(std::span<const double> series);

void write_signal_table_csv(std::ostream& out, const std::vector<DailySignalRow>& rows);
std::vector<DailySignalRow> parse_signal_table_csv(std::istream& in);
void write_drop_log(std::ostream& out, const DropLog& drops);

}  // namespace moonvol
