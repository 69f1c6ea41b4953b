#include "moonvol/volatility.hpp"

#include "moonvol/error.hpp"

#include <cmath>
#include <numbers>

namespace moonvol {

LogRanges log_ranges(const OhlcBar& bar, std::optional<double> prev_close) {
    LogRanges r;
    r.h = std::log(bar.high / bar.open);
    r.l = std::log(bar.low / bar.open);
    r.c = std::log(bar.close / bar.open);
    if (prev_close) {
        const double gap = std::log(bar.open / *prev_close);
        r.j = gap * gap;
    }
    return r;
}

double parkinson(const LogRanges& r) {
    const double range = r.h - r.l;
    return range * range / (4.0 * std::numbers::ln2);
}

double garman_klass(const LogRanges& r) {
    const double range = r.h - r.l;
    return 0.511 * range * range - 0.383 * r.c * r.c - 0.019 * (r.c * (r.h + r.l) - 2.0 * r.h * r.l);
}

double rogers_satchell(const LogRanges& r, RsForm form) {
    const double up = r.h * (r.h - r.c);
    const double down = r.l * (r.l - r.c);
    return form == RsForm::standard ? up + down : up - down;
}

DailyVariance log_volatility(const LogRanges& r, const VolatilityOptions& options) {
    DailyVariance v;
    v.parkinson = parkinson(r);
    v.garman_klass = garman_klass(r);
    v.rogers_satchell = rogers_satchell(r, options.rs_form);
    v.composite = (v.parkinson + v.garman_klass + v.rogers_satchell) / 3.0;
    if (options.include_overnight) v.composite += r.j;
    if (!(v.composite > 0.0)) throw DegenerateBarError("degenerate bar: composite variance is not positive");
    v.log_vol = std::log(kPercentSquared * kTradingDaysPerYear * v.composite);
    return v;
}

VolatilitySeries volatility_series(const std::vector<OhlcBar>& bars, const VolatilityOptions& options) {
    VolatilitySeries out;
    out.days.reserve(bars.size());
    std::optional<double> prev_close;
    for (const auto& bar : bars) {
        try {
            out.days.push_back({bar.date, log_volatility(log_ranges(bar, prev_close), options)});
        } catch (const DegenerateBarError& e) {
            out.dropped.push_back({bar.date, e.what()});
        }
        prev_close = bar.close;
    }
    return out;
}

}  // namespace moonvol
