#include "moonvol/signals.hpp"

#include "moonvol/csv.hpp"
#include "moonvol/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace moonvol {

Date assign_trading_day(Date d, const TradingCalendar& calendar, MergeDirection direction) {
    if (calendar.empty()) throw DataError("empty trading calendar");
    if (direction == MergeDirection::previous) {
        const auto idx = calendar.floor_index(d);
        return calendar.days()[idx < 0 ? 0 : static_cast<std::size_t>(idx)];
    }
    const auto idx = calendar.ceil_index(d);
    return calendar.days()[std::min(idx, calendar.size() - 1)];
}

DayBuckets bucket_by_day(const std::vector<TweetRecord>& records, const TradingCalendar& calendar,
                         MergeDirection direction) {
    DayBuckets buckets;
    for (Date d : calendar.days()) buckets[d];
    for (std::size_t i = 0; i < records.size(); ++i)
        buckets[assign_trading_day(exchange_local_date(records[i].created_at), calendar, direction)].push_back(i);
    return buckets;
}

std::map<Date, std::size_t> daily_counts(const std::vector<TweetRecord>& records) {
    std::map<Date, std::size_t> counts;
    for (const auto& r : records) ++counts[exchange_local_date(r.created_at)];
    return counts;
}

DailySeries moon1(const std::map<Date, std::size_t>& counts, const TradingCalendar& calendar,
                  MergeDirection direction, LogBase base) {
    if (calendar.empty()) throw DataError("empty trading calendar");
    Date first = calendar.front(), last = calendar.back();
    if (!counts.empty()) {
        first = std::min(first, counts.begin()->first);
        last = std::max(last, counts.rbegin()->first);
    }

    struct Window {
        double total = 0.0;
        std::size_t days = 0;
    };
    std::map<Date, Window> windows;
    for (Date d = first; d <= last; d = d.next()) {
        auto& w = windows[assign_trading_day(d, calendar, direction)];
        auto it = counts.find(d);
        if (it != counts.end()) w.total += static_cast<double>(it->second);
        ++w.days;
    }

    DailySeries out;
    for (Date day : calendar.days()) {
        const auto& w = windows[day];
        const double merged = w.total / static_cast<double>(w.days);
        if (!(merged > 0.0)) {
            out.drops.push_back({day, "moon1", "zero tweet activity"});
            continue;
        }
        out.values[day] = base == LogBase::e ? std::log(merged) : std::log10(merged);
    }
    return out;
}

namespace {

double population_std(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size()));
}

}  // namespace

DailySeries moon2(const std::map<Date, std::vector<int>>& buckets) {
    std::map<Date, std::vector<ScoredTweet>> scored;
    for (const auto& [day, ternaries] : buckets) {
        auto& out = scored[day];
        for (int t : ternaries) out.push_back({t, 0.0, 0});
    }
    return aggregate_sentiment(scored, Aggregator::std_dev);
}

DailySeries aggregate_sentiment(const std::map<Date, std::vector<ScoredTweet>>& buckets, Aggregator aggregator) {
    DailySeries out;
    for (const auto& [day, tweets] : buckets) {
        if (tweets.empty()) {
            out.drops.push_back({day, "moon2", "no text-only tweets"});
            continue;
        }
        const double n = static_cast<double>(tweets.size());
        double value = 0.0;
        switch (aggregator) {
            case Aggregator::std_dev: {
                std::vector<double> xs;
                xs.reserve(tweets.size());
                for (const auto& t : tweets) xs.push_back(t.ternary);
                value = population_std(xs);
                break;
            }
            case Aggregator::mean: {
                for (const auto& t : tweets) value += t.compound;
                value /= n;
                break;
            }
            case Aggregator::weighted: {
                double weight_sum = 0.0;
                for (const auto& t : tweets) {
                    const double w = 1.0 + static_cast<double>(t.engagement);
                    value += w * t.compound;
                    weight_sum += w;
                }
                value /= weight_sum;
                break;
            }
            case Aggregator::ratio: {
                for (const auto& t : tweets) value += t.ternary > 0 ? 1.0 : 0.0;
                value /= n;
                break;
            }
        }
        out.values[day] = value;
    }
    return out;
}

SignalTable assemble_table(const TradingCalendar& calendar, const std::map<Date, double>& v,
                           const std::map<Date, double>& moon1_values, const std::map<Date, double>& moon2_values,
                           const std::vector<ExogenousSeries>& exogenous, const DropLog& upstream) {
    auto find_series = [&](SeriesName name) -> std::map<Date, double> {
        for (const auto& s : exogenous)
            if (s.name == name) return {s.points.begin(), s.points.end()};
        throw DataError("exogenous series " + to_string(name) + " not provided");
    };
    const auto yolo1 = find_series(SeriesName::yolo1);
    const auto yolo2 = find_series(SeriesName::yolo2);
    const auto m = find_series(SeriesName::m);
    const auto vix = find_series(SeriesName::vix);

    SignalTable table;
    for (Date day : calendar.days()) {
        std::string missing;
        std::string reasons;
        auto take = [&](const std::map<Date, double>& col, const char* name) -> double {
            auto it = col.find(day);
            if (it != col.end()) return it->second;
            missing += (missing.empty() ? "" : ",") + std::string(name);
            std::string reason = "missing value";
            for (const auto& d : upstream)
                if (d.date == day && d.column == name) reason = d.reason;
            reasons += (reasons.empty() ? "" : "; ") + reason;
            return 0.0;
        };
        DailySignalRow row;
        row.date = day;
        row.v = take(v, "v");
        row.moon1 = take(moon1_values, "moon1");
        row.moon2 = take(moon2_values, "moon2");
        row.yolo1 = take(yolo1, "yolo1");
        row.yolo2 = take(yolo2, "yolo2");
        row.m = take(m, "m");
        row.vix = take(vix, "vix");
        if (missing.empty())
            table.rows.push_back(row);
        else
            table.drops.push_back({day, missing, reasons});
    }
    if (table.rows.empty()) throw DataError("empty signal table: no trading day has every column");
    return table;
}

std::vector<double> normalize_unit_interval(std::span<const double> series) {
    if (series.empty()) throw DataError("degenerate range: empty series");
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    const double min = *lo, range = *hi - *lo;
    if (!(range > 0.0)) throw DataError("degenerate range: series is constant");
    std::vector<double> out;
    out.reserve(series.size());
    for (double x : series) out.push_back((x - min) / range);
    return out;
}

void write_signal_table_csv(std::ostream& out, const std::vector<DailySignalRow>& rows) {
    out << "date,v,moon1,moon2,yolo1,yolo2,m,vix\n";
    for (const auto& r : rows) {
        out << r.date.to_string();
        for (double x : {r.v, r.moon1, r.moon2, r.yolo1, r.yolo2, r.m, r.vix}) out << ',' << csv::format_double(x);
        out << '\n';
    }
}

std::vector<DailySignalRow> parse_signal_table_csv(std::istream& in) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw ParseError("empty features file");
    csv::expect_header(*header, {"date", "v", "moon1", "moon2", "yolo1", "yolo2", "m", "vix"});
    std::vector<DailySignalRow> rows;
    while (auto rec = reader.next()) {
        const auto line = reader.line();
        if (rec->size() != 8) throw ParseError("expected 8 fields, got " + std::to_string(rec->size()), line);
        DailySignalRow r;
        try {
            r.date = Date::parse((*rec)[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line);
        }
        double* cols[] = {&r.v, &r.moon1, &r.moon2, &r.yolo1, &r.yolo2, &r.m, &r.vix};
        static constexpr const char* names[] = {"v", "moon1", "moon2", "yolo1", "yolo2", "m", "vix"};
        for (std::size_t k = 0; k < 7; ++k) *cols[k] = csv::parse_double((*rec)[k + 1], names[k], line);
        if (!rows.empty() && !(rows.back().date < r.date))
            throw DataError("features dates not strictly increasing at line " + std::to_string(line));
        rows.push_back(r);
    }
    return rows;
}

void write_drop_log(std::ostream& out, const DropLog& drops) {
    for (const auto& d : drops) out << d.date.to_string() << '\t' << d.column << '\t' << d.reason << '\n';
}

}  // namespace moonvol
