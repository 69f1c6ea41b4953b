#pragma once

#include "moonvol/market_data.hpp"
#include "moonvol/sentiment.hpp"
#include "moonvol/signals.hpp"
#include "moonvol/volatility.hpp"

#include <optional>
#include <vector>

namespace moonvol {

struct FeatureOptions {
    VolatilityOptions volatility;
    MergeDirection merge = MergeDirection::previous;
    LogBase log_base = LogBase::e;
    Aggregator aggregator = Aggregator::std_dev;
    Thresholds thresholds;
};

struct FeatureResult {
    TradingCalendar calendar;
    VolatilitySeries volatility;
    SignalTable table;
    std::size_t tweets_total = 0;
    std::size_t tweets_scored = 0;
};

/// OHLC bars + tweets + exogenous series -> regression-ready signal table.
/// MOON1 counts every tweet; MOON2 uses only text-only originals. The calendar
/// defaults to the bar dates; an explicit calendar must contain every bar date.
FeatureResult build_features(const std::vector<OhlcBar>& bars, const std::vector<TweetRecord>& tweets,
                             const std::vector<ExogenousSeries>& exogenous, const Lexicon& lexicon,
                             const FeatureOptions& options = {},
                             const std::optional<TradingCalendar>& calendar = std::nullopt);

}  // namespace moonvol
