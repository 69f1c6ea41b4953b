#pragma once

#include "moonvol/market_data.hpp"

#include <optional>
#include <vector>

namespace moonvol {

/// Log prices relative to the open, plus the squared overnight return.
struct LogRanges {
    double h = 0.0;  ///< ln(H/O) >= 0
    double l = 0.0;  ///< ln(L/O) <= 0
    double c = 0.0;  ///< ln(C/O), l <= c <= h
    double j = 0.0;  ///< (ln(O/C_prev))^2, 0 without a previous close
};

/// Sign convention for the Rogers-Satchell term.
enum class RsForm {
    standard,     ///< h(h-c) + l(l-c), non-negative
    paper_minus,  ///< h(h-c) - l(l-c)
};

struct VolatilityOptions {
    RsForm rs_form = RsForm::standard;
    bool include_overnight = false;
};

/// Daily variances of log returns and the annualized log-variance scale.
struct DailyVariance {
    double parkinson = 0.0;
    double garman_klass = 0.0;
    double rogers_satchell = 0.0;
    double composite = 0.0;
    double log_vol = 0.0;
};

LogRanges log_ranges(const OhlcBar& bar, std::optional<double> prev_close = std::nullopt);

double parkinson(const LogRanges& r);
double garman_klass(const LogRanges& r);
double rogers_satchell(const LogRanges& r, RsForm form = RsForm::standard);

/// Trading days per year and the percent-squared scale used in log_vol.
inline constexpr double kTradingDaysPerYear = 252.0;
inline constexpr double kPercentSquared = 100.0 * 100.0;

/// composite = (P + G + R) / 3 (+ j when requested); log_vol = ln(100^2 * 252 * composite).
/// Throws DegenerateBarError when composite <= 0.
DailyVariance log_volatility(const LogRanges& r, const VolatilityOptions& options = {});

struct DatedVariance {
    Date date;
    DailyVariance variance;
};

struct DroppedBar {
    Date date;
    std::string reason;
};

struct VolatilitySeries {
    std::vector<DatedVariance> days;
    std::vector<DroppedBar> dropped;
};

/// Evaluates every bar, chaining each bar's previous close. Degenerate bars are
/// dropped and reported rather than raised.
VolatilitySeries volatility_series(const std::vector<OhlcBar>& bars, const VolatilityOptions& options = {});

}  // namespace moonvol
