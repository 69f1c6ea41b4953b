#pragma once

#include "moonvol/date.hpp"

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace moonvol {

/// One trading day of prices. Invariants: all prices > 0, low <= min(open, close),
/// high >= max(open, close).
struct OhlcBar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;

    friend bool operator==(const OhlcBar&, const OhlcBar&) = default;
};

/// Returns an empty string when the bar is valid, otherwise the violated bound.
std::string check_bar(const OhlcBar& bar);

struct PublicMetrics {
    std::uint64_t like_count = 0;
    std::uint64_t retweet_count = 0;
    std::uint64_t quote_count = 0;
    std::uint64_t reply_count = 0;

    std::uint64_t total() const { return like_count + retweet_count + quote_count + reply_count; }
    friend bool operator==(const PublicMetrics&, const PublicMetrics&) = default;
};

struct TweetRecord {
    std::string id;
    UtcTime created_at;
    std::string text;
    bool has_media = false;
    bool is_retweet = false;
    PublicMetrics metrics;

    friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

enum class SeriesName { vix, m, yolo1, yolo2 };

std::string to_string(SeriesName name);
SeriesName parse_series_name(std::string_view text);

/// Daily exogenous regressor. Dates strictly increasing.
struct ExogenousSeries {
    SeriesName name = SeriesName::vix;
    std::vector<std::pair<Date, double>> points;
};

/// Ordered set of exchange trading days.
class TradingCalendar {
public:
    TradingCalendar() = default;
    /// Throws DataError unless `days` is strictly increasing.
    explicit TradingCalendar(std::vector<Date> days);

    static TradingCalendar from_bars(const std::vector<OhlcBar>& bars);

    const std::vector<Date>& days() const noexcept { return days_; }
    std::size_t size() const noexcept { return days_.size(); }
    bool empty() const noexcept { return days_.empty(); }
    bool contains(Date d) const;
    Date front() const { return days_.front(); }
    Date back() const { return days_.back(); }

    /// Index of the last trading day <= d, or -1 when d precedes the calendar.
    std::ptrdiff_t floor_index(Date d) const;
    /// Index of the first trading day >= d, or size() when d follows the calendar.
    std::size_t ceil_index(Date d) const;

private:
    std::vector<Date> days_;
};

std::vector<OhlcBar> parse_ohlc_csv(std::istream& in);
void write_ohlc_csv(std::ostream& out, const std::vector<OhlcBar>& bars);

std::vector<TweetRecord> parse_tweets_jsonl(std::istream& in);
void write_tweets_jsonl(std::ostream& out, const std::vector<TweetRecord>& tweets);

/// Keeps text-only, original tweets (no media, no retweets); order preserved.
std::vector<TweetRecord> filter_for_sentiment(const std::vector<TweetRecord>& records);

ExogenousSeries parse_exogenous_csv(std::istream& in, SeriesName name);
void write_exogenous_csv(std::ostream& out, const ExogenousSeries& series);

/// One date per line; blank lines and `#` comments ignored.
TradingCalendar parse_calendar(std::istream& in);

/// Restricts `series` to the trading days, forward-filling days without a value.
/// Throws DataError when a trading day precedes the first available value.
ExogenousSeries align_to_calendar(const ExogenousSeries& series, const TradingCalendar& calendar);

}  // namespace moonvol
