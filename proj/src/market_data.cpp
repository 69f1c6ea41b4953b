#include "moonvol/market_data.hpp"

#include "moonvol/csv.hpp"
#include "moonvol/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <unordered_set>

namespace moonvol {

using nlohmann::json;

std::string check_bar(const OhlcBar& bar) {
    if (!(bar.open > 0.0) || !(bar.high > 0.0) || !(bar.low > 0.0) || !(bar.close > 0.0))
        return "non-positive price";
    if (bar.high < bar.low) return "high < low";
    if (bar.low > std::min(bar.open, bar.close)) return "low > min(open, close)";
    if (bar.high < std::max(bar.open, bar.close)) return "high < max(open, close)";
    return {};
}

std::string to_string(SeriesName name) {
    switch (name) {
        case SeriesName::vix: return "VIX";
        case SeriesName::m: return "M";
        case SeriesName::yolo1: return "YOLO1";
        case SeriesName::yolo2: return "YOLO2";
    }
    throw InternalError("unknown series name");
}

SeriesName parse_series_name(std::string_view text) {
    for (auto n : {SeriesName::vix, SeriesName::m, SeriesName::yolo1, SeriesName::yolo2})
        if (text == to_string(n)) return n;
    throw ParseError("unknown exogenous series '" + std::string(text) + "' (expected VIX, M, YOLO1 or YOLO2)");
}

TradingCalendar::TradingCalendar(std::vector<Date> days) : days_(std::move(days)) {
    for (std::size_t i = 1; i < days_.size(); ++i)
        if (!(days_[i - 1] < days_[i]))
            throw DataError("trading calendar not strictly increasing at " + days_[i].to_string());
}

TradingCalendar TradingCalendar::from_bars(const std::vector<OhlcBar>& bars) {
    std::vector<Date> days;
    days.reserve(bars.size());
    for (const auto& b : bars) days.push_back(b.date);
    return TradingCalendar{std::move(days)};
}

bool TradingCalendar::contains(Date d) const {
    return std::binary_search(days_.begin(), days_.end(), d);
}

std::ptrdiff_t TradingCalendar::floor_index(Date d) const {
    auto it = std::upper_bound(days_.begin(), days_.end(), d);
    return (it - days_.begin()) - 1;
}

std::size_t TradingCalendar::ceil_index(Date d) const {
    return static_cast<std::size_t>(std::lower_bound(days_.begin(), days_.end(), d) - days_.begin());
}

std::vector<OhlcBar> parse_ohlc_csv(std::istream& in) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw ParseError("empty OHLC file");
    csv::expect_header(*header, {"date", "open", "high", "low", "close"});

    std::vector<std::pair<OhlcBar, std::size_t>> rows;
    while (auto rec = reader.next()) {
        const auto line = reader.line();
        if (rec->size() != 5)
            throw ParseError("expected 5 fields, got " + std::to_string(rec->size()), line);
        OhlcBar bar;
        try {
            bar.date = Date::parse((*rec)[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line);
        }
        bar.open = csv::parse_double((*rec)[1], "open", line);
        bar.high = csv::parse_double((*rec)[2], "high", line);
        bar.low = csv::parse_double((*rec)[3], "low", line);
        bar.close = csv::parse_double((*rec)[4], "close", line);
        if (auto bad = check_bar(bar); !bad.empty()) throw DataError(bad + " at line " + std::to_string(line));
        rows.emplace_back(bar, line);
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first.date < b.first.date; });
    std::vector<OhlcBar> bars;
    bars.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].first.date == rows[i - 1].first.date)
            throw DataError("duplicate date " + rows[i].first.date.to_string() + " at line " +
                            std::to_string(rows[i].second));
        bars.push_back(rows[i].first);
    }
    return bars;
}

void write_ohlc_csv(std::ostream& out, const std::vector<OhlcBar>& bars) {
    out << "date,open,high,low,close\n";
    for (const auto& b : bars)
        out << b.date.to_string() << ',' << csv::format_double(b.open) << ',' << csv::format_double(b.high)
            << ',' << csv::format_double(b.low) << ',' << csv::format_double(b.close) << '\n';
}

namespace {

std::uint64_t read_count(const json& metrics, const char* key, std::size_t line) {
    auto it = metrics.find(key);
    if (it == metrics.end() || it->is_null()) return 0;
    if (it->is_number_unsigned()) return it->get<std::uint64_t>();
    if (it->is_number_integer()) throw ParseError(std::string("negative ") + key, line);
    throw ParseError(std::string("non-integer ") + key, line);
}

bool read_flag(const json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return false;
    if (!it->is_boolean()) throw ParseError(std::string("field '") + key + "' must be boolean", line);
    return it->get<bool>();
}

}  // namespace

std::vector<TweetRecord> parse_tweets_jsonl(std::istream& in) {
    std::vector<TweetRecord> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) throw ParseError("unparseable JSON", line_no);

        TweetRecord rec;
        auto id = obj.find("id");
        if (id == obj.end()) throw ParseError("missing field 'id'", line_no);
        if (id->is_string())
            rec.id = id->get<std::string>();
        else if (id->is_number_integer())
            rec.id = id->dump();
        else
            throw ParseError("field 'id' must be a string", line_no);

        auto created = obj.find("created_at");
        if (created == obj.end() || !created->is_string())
            throw ParseError("missing field 'created_at'", line_no);
        try {
            rec.created_at = parse_utc_timestamp(created->get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }

        auto text = obj.find("text");
        if (text == obj.end() || !text->is_string()) throw ParseError("missing field 'text'", line_no);
        rec.text = text->get<std::string>();

        rec.has_media = read_flag(obj, "has_media", line_no);
        rec.is_retweet = read_flag(obj, "is_retweet", line_no);

        if (auto pm = obj.find("public_metrics"); pm != obj.end() && !pm->is_null()) {
            if (!pm->is_object()) throw ParseError("field 'public_metrics' must be an object", line_no);
            rec.metrics.like_count = read_count(*pm, "like_count", line_no);
            rec.metrics.retweet_count = read_count(*pm, "retweet_count", line_no);
            rec.metrics.quote_count = read_count(*pm, "quote_count", line_no);
            rec.metrics.reply_count = read_count(*pm, "reply_count", line_no);
        }

        if (!seen.insert(rec.id).second) continue;  // exact id duplicate
        out.push_back(std::move(rec));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const TweetRecord& a, const TweetRecord& b) { return a.created_at < b.created_at; });
    return out;
}

void write_tweets_jsonl(std::ostream& out, const std::vector<TweetRecord>& tweets) {
    for (const auto& t : tweets) {
        json obj = {{"id", t.id},
                    {"created_at", format_utc_timestamp(t.created_at)},
                    {"text", t.text},
                    {"has_media", t.has_media},
                    {"is_retweet", t.is_retweet},
                    {"public_metrics",
                     {{"like_count", t.metrics.like_count},
                      {"retweet_count", t.metrics.retweet_count},
                      {"quote_count", t.metrics.quote_count},
                      {"reply_count", t.metrics.reply_count}}}};
        out << obj.dump() << '\n';
    }
}

std::vector<TweetRecord> filter_for_sentiment(const std::vector<TweetRecord>& records) {
    std::vector<TweetRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [](const TweetRecord& r) { return !r.has_media && !r.is_retweet; });
    return out;
}

ExogenousSeries parse_exogenous_csv(std::istream& in, SeriesName name) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw ParseError("empty " + to_string(name) + " file");
    csv::expect_header(*header, {"date", "value"});

    ExogenousSeries series{name, {}};
    std::vector<std::size_t> lines;
    while (auto rec = reader.next()) {
        const auto line = reader.line();
        if (rec->size() != 2) throw ParseError("expected 2 fields, got " + std::to_string(rec->size()), line);
        Date d;
        try {
            d = Date::parse((*rec)[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line);
        }
        series.points.emplace_back(d, csv::parse_double((*rec)[1], "value", line));
        lines.push_back(line);
    }
    for (std::size_t i = 1; i < series.points.size(); ++i)
        if (!(series.points[i - 1].first < series.points[i].first))
            throw DataError(to_string(name) + " dates not strictly increasing at line " + std::to_string(lines[i]));
    return series;
}

void write_exogenous_csv(std::ostream& out, const ExogenousSeries& series) {
    out << "date,value\n";
    for (const auto& [d, v] : series.points) out << d.to_string() << ',' << csv::format_double(v) << '\n';
}

TradingCalendar parse_calendar(std::istream& in) {
    std::vector<Date> days;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t");
        try {
            days.push_back(Date::parse(std::string_view(line).substr(first, last - first + 1)));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return TradingCalendar{std::move(days)};
}

ExogenousSeries align_to_calendar(const ExogenousSeries& series, const TradingCalendar& calendar) {
    ExogenousSeries out{series.name, {}};
    out.points.reserve(calendar.size());
    std::size_t j = 0;
    const double* last = nullptr;
    for (Date day : calendar.days()) {
        while (j < series.points.size() && series.points[j].first <= day) last = &series.points[j++].second;
        if (!last)
            throw DataError(to_string(series.name) + " has no value on or before trading day " + day.to_string());
        out.points.emplace_back(day, *last);
    }
    return out;
}

}  // namespace moonvol
