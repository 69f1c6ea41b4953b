#include "moonvol/date.hpp"

#include "moonvol/error.hpp"

#include <cstdio>

namespace moonvol {

namespace {

using namespace std::chrono;

bool all_digits(std::string_view s) {
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return !s.empty();
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

// Second Sunday of March 02:00 EST and first Sunday of November 02:00 EDT, as UTC.
sys_seconds dst_start_utc(year y) {
    return sys_seconds{sys_days{y / March / Sunday[2]}} + hours{7};
}

sys_seconds dst_end_utc(year y) {
    return sys_seconds{sys_days{y / November / Sunday[1]}} + hours{6};
}

}  // namespace

Date Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !all_digits(text.substr(0, 4)) ||
        !all_digits(text.substr(5, 2)) || !all_digits(text.substr(8, 2)))
        throw ParseError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    year_month_day ymd{year{to_int(text.substr(0, 4))}, month{static_cast<unsigned>(to_int(text.substr(5, 2)))},
                       day{static_cast<unsigned>(to_int(text.substr(8, 2)))}};
    if (!ymd.ok()) throw ParseError("invalid calendar date '" + std::string(text) + "'");
    return Date{sys_days{ymd}};
}

bool Date::is_weekend() const {
    const auto wd = weekday();
    return wd == Saturday || wd == Sunday;
}

std::string Date::to_string() const {
    const auto ymd = this->ymd();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

UtcTime parse_utc_timestamp(std::string_view text) {
    auto fail = [&]() -> UtcTime {
        throw ParseError("invalid UTC timestamp '" + std::string(text) + "'");
    };
    if (text.size() < 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':') return fail();
    Date date;
    try {
        date = Date::parse(text.substr(0, 10));
    } catch (const ParseError&) {
        return fail();
    }
    auto hh = text.substr(11, 2), mm = text.substr(14, 2), ss = text.substr(17, 2);
    if (!all_digits(hh) || !all_digits(mm) || !all_digits(ss)) return fail();
    const int h = to_int(hh), m = to_int(mm), s = to_int(ss);
    if (h > 23 || m > 59 || s > 59) return fail();

    auto rest = text.substr(19);
    if (!rest.empty() && rest.front() == '.') {
        std::size_t i = 1;
        while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
        if (i == 1) return fail();
        rest = rest.substr(i);  // sub-second precision is dropped
    }
    if (rest != "Z" && rest != "+00:00") return fail();
    return sys_seconds{date.days()} + hours{h} + minutes{m} + seconds{s};
}

std::string format_utc_timestamp(UtcTime t) {
    const auto day = floor<days>(t);
    const hh_mm_ss<seconds> tod{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", Date{day}.to_string().c_str(),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

std::chrono::seconds new_york_utc_offset(UtcTime t) {
    const year y = year_month_day{floor<days>(t)}.year();
    if (t >= dst_start_utc(y) && t < dst_end_utc(y)) return hours{-4};
    return hours{-5};
}

Date exchange_local_date(UtcTime t) {
    return Date{floor<days>(t + new_york_utc_offset(t))};
}

UtcTime exchange_local_to_utc(Date date, std::chrono::seconds time_of_day) {
    const auto wall = sys_seconds{date.days()} + time_of_day;
    // Daylight time first so an ambiguous fall-back wall time resolves to the earlier instant.
    for (const seconds offset : {seconds{hours{-4}}, seconds{hours{-5}}}) {
        const auto candidate = wall - offset;
        if (new_york_utc_offset(candidate) == offset) return candidate;
    }
    return wall + hours{5};  // spring-forward gap
}

}  // namespace moonvol
