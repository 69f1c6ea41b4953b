#include "moonvol/pipeline.hpp"

#include "moonvol/error.hpp"

namespace moonvol {

FeatureResult build_features(const std::vector<OhlcBar>& bars, const std::vector<TweetRecord>& tweets,
                             const std::vector<ExogenousSeries>& exogenous, const Lexicon& lexicon,
                             const FeatureOptions& options, const std::optional<TradingCalendar>& calendar) {
    FeatureResult out;
    if (bars.empty()) throw DataError("no OHLC bars");
    out.calendar = calendar ? *calendar : TradingCalendar::from_bars(bars);
    for (const auto& b : bars)
        if (!out.calendar.contains(b.date))
            throw DataError("bar date " + b.date.to_string() + " is not in the trading calendar");

    out.volatility = volatility_series(bars, options.volatility);
    std::map<Date, double> v;
    for (const auto& d : out.volatility.days) v[d.date] = d.variance.log_vol;
    DropLog upstream;
    for (const auto& d : out.volatility.dropped) upstream.push_back({d.date, "v", d.reason});

    out.tweets_total = tweets.size();
    auto activity = moon1(daily_counts(tweets), out.calendar, options.merge, options.log_base);
    upstream.insert(upstream.end(), activity.drops.begin(), activity.drops.end());

    const auto text_only = filter_for_sentiment(tweets);
    if (text_only.empty()) throw DataError("no text-only tweets to score: sentiment feature is empty");
    out.tweets_scored = text_only.size();
    const auto scores = score_batch(text_only, lexicon, options.thresholds);
    std::map<Date, std::vector<ScoredTweet>> scored;
    for (const auto& [day, indices] : bucket_by_day(text_only, out.calendar, options.merge)) {
        auto& bucket = scored[day];
        bucket.reserve(indices.size());
        for (auto i : indices)
            bucket.push_back({scores[i].second.ternary, scores[i].second.compound, text_only[i].metrics.total()});
    }
    auto sentiment = aggregate_sentiment(scored, options.aggregator);
    upstream.insert(upstream.end(), sentiment.drops.begin(), sentiment.drops.end());

    std::vector<ExogenousSeries> aligned;
    for (const auto& s : exogenous) aligned.push_back(align_to_calendar(s, out.calendar));

    out.table = assemble_table(out.calendar, v, activity.values, sentiment.values, aligned, upstream);
    return out;
}

}  // namespace moonvol
