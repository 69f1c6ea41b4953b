#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace moonvol {

/// Calendar date (no time of day, no zone).
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
    constexpr Date(int y, unsigned m, unsigned d)
        : days_(std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}) {}

    /// Strict `YYYY-MM-DD`; throws ParseError on anything else or an invalid day.
    static Date parse(std::string_view text);

    constexpr std::chrono::sys_days days() const { return days_; }
    std::chrono::year_month_day ymd() const { return std::chrono::year_month_day{days_}; }
    std::chrono::weekday weekday() const { return std::chrono::weekday{days_}; }
    bool is_weekend() const;

    constexpr Date next() const { return Date{days_ + std::chrono::days{1}}; }
    constexpr Date prev() const { return Date{days_ - std::chrono::days{1}}; }
    constexpr Date operator+(int n) const { return Date{days_ + std::chrono::days{n}}; }
    constexpr long operator-(Date other) const { return (days_ - other.days_).count(); }

    std::string to_string() const;

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

using UtcTime = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SS[.fff]Z` (also accepts a `+00:00` suffix).
UtcTime parse_utc_timestamp(std::string_view text);
std::string format_utc_timestamp(UtcTime t);

/// UTC offset of America/New_York at instant `t` (US rules in force since 2007).
std::chrono::seconds new_york_utc_offset(UtcTime t);

/// Calendar date on the New York exchange clock.
Date exchange_local_date(UtcTime t);

/// Inverse of the exchange clock for a local wall time on `date`.
/// Ambiguous fall-back times map to the earlier instant; spring-forward gap times are read as EST.
UtcTime exchange_local_to_utc(Date date, std::chrono::seconds time_of_day);

}  // namespace moonvol
