#include "moonvol/synth.hpp"

#include "moonvol/error.hpp"
#include "moonvol/volatility.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace moonvol {

double Rng::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return inverse_normal_cdf(uniform()); }

std::size_t Rng::below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

std::uint64_t Rng::poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean < 10.0) {
        double p = std::exp(-mean), cdf = p;
        const double u = uniform();
        std::uint64_t k = 0;
        while (u > cdf && k < 1000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0))
            return static_cast<std::uint64_t>(k);
    }
}

double inverse_normal_cdf(double p) {
    static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                                -2.759285104469687e+02, 1.383577518672690e+02,
                                                -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                                -1.556989798598866e+02, 6.680131188771972e+01,
                                                -1.328068155288572e+01};
    static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                                -2.400758277161838e+00, -2.549732539343734e+00,
                                                4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

OhlcBar gbm_day(Rng& rng, Date date, double open, double daily_variance, int steps, ExtremeSampling sampling) {
    const double step_var = daily_variance / steps;
    const double step_sd = std::sqrt(step_var);
    double x = 0.0, hi = 0.0, lo = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double next = x + step_sd * rng.normal();
        if (sampling == ExtremeSampling::bridge) {
            const double gap = next - x;
            const double up = std::sqrt(gap * gap - 2.0 * step_var * std::log(rng.uniform()));
            const double down = std::sqrt(gap * gap - 2.0 * step_var * std::log(rng.uniform()));
            hi = std::max(hi, 0.5 * (x + next + up));
            lo = std::min(lo, 0.5 * (x + next - down));
        } else {
            hi = std::max(hi, next);
            lo = std::min(lo, next);
        }
        x = next;
    }
    OhlcBar bar{date, open, open * std::exp(hi), open * std::exp(lo), open * std::exp(x)};
    // Rounding in exp() must not break the bar invariants.
    bar.high = std::max({bar.high, bar.open, bar.close});
    bar.low = std::min({bar.low, bar.open, bar.close});
    return bar;
}

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& obj, const char* key, T& field) {
    if (auto it = obj.find(key); it != obj.end()) {
        try {
            field = it->get<T>();
        } catch (const json::exception&) {
            throw ConfigError(std::string("scenario field '") + key + "' has the wrong type");
        }
    }
}

void validate(const ScenarioConfig& c) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("invalid scenario: ") + what);
    };
    require(c.n_days >= 2, "n_days must be >= 2");
    require(c.daily_vol_base > 0.0, "daily_vol_base must be > 0");
    require(c.vol_persistence >= 0.0 && c.vol_persistence < 1.0, "vol_persistence must be in [0, 1)");
    require(std::fabs(c.activity_vol_corr) < 1.0, "activity_vol_corr must be in (-1, 1)");
    require(std::fabs(c.sentiment_vol_corr) < 1.0, "sentiment_vol_corr must be in (-1, 1)");
    require(c.base_tweet_rate > 0.0, "base_tweet_rate must be > 0");
    require(c.intraday_steps >= 100, "intraday_steps must be >= 100");
    require(c.start_price > 0.0, "start_price must be > 0");
    require(c.log_variance_std > 0.0, "log_variance_std must be > 0");
    require(c.activity_dispersion > 0.0, "activity_dispersion must be > 0");
    require(c.media_fraction >= 0.0 && c.retweet_fraction >= 0.0 &&
                (1.0 - c.media_fraction) * (1.0 - c.retweet_fraction) > 0.0,
            "media/retweet fractions must leave some text-only tweets");
    require(c.media_fraction <= 1.0 && c.retweet_fraction <= 1.0, "media/retweet fractions must be <= 1");
    require(0.0 < c.polarity_std_low && c.polarity_std_low < c.polarity_std_high && c.polarity_std_high <= 1.0,
            "polarity std band must satisfy 0 < low < high <= 1");
    for (double r : {c.yolo1_vol_corr, c.yolo2_vol_corr, c.m_vol_corr, c.vix_vol_corr})
        require(std::fabs(r) < 1.0, "exogenous correlations must be in (-1, 1)");
}

// Var(ln composite) for bars of fixed variance: the estimator is scale free, so a
// unit-variance Monte Carlo on an independent stream suffices.
double estimator_noise_variance(const ScenarioConfig& c) {
    constexpr int kDays = 4000;
    Rng rng(c.seed ^ 0x9E3779B97F4A7C15ULL);
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < kDays; ++i) {
        const auto bar = gbm_day(rng, c.start_date, 1.0, 1e-4, c.intraday_steps);
        const double lv = std::log(log_volatility(log_ranges(bar)).composite);
        sum += lv;
        sum_sq += lv * lv;
    }
    const double mean = sum / kDays;
    return (sum_sq - kDays * mean * mean) / (kDays - 1);
}

// Day-level draws for the MOON2 calibration: latent state, own polarity noise and the
// sorted per-tweet uniforms of each merged bucket's text-only tweets.
struct PolarityDays {
    std::vector<double> z, own;
    std::vector<std::size_t> offset;  // tweets of day i: uniforms[offset[i], offset[i + 1])
    std::vector<double> uniforms;
};

PolarityDays draw_polarity_days(const ScenarioConfig& c, const Calibration& cal) {
    constexpr int kDays = 50000;
    Rng rng(c.seed ^ 0xD1B54A32D192ED03ULL);
    const double text_share = (1.0 - c.media_fraction) * (1.0 - c.retweet_fraction);
    PolarityDays d;
    d.offset.push_back(0);
    for (int i = 0; i < kDays; ++i) {
        const double z = rng.normal();
        const double rate = std::exp(std::log(c.base_tweet_rate) + cal.activity_loading * z +
                                     cal.activity_noise * rng.normal());
        const int window = i % 5 == 4 ? 3 : 1;  // Friday pools the weekend
        const auto n = rng.poisson(window * rate * text_share);
        d.z.push_back(z);
        d.own.push_back(rng.normal());
        const auto first = d.uniforms.size();
        for (std::uint64_t k = 0; k < n; ++k) d.uniforms.push_back(rng.uniform());
        std::sort(d.uniforms.begin() + static_cast<std::ptrdiff_t>(first), d.uniforms.end());
        d.offset.push_back(d.uniforms.size());
    }
    return d;
}

// Corr(MOON2, V) implied by a polarity loading, V = s z + estimator noise.
double polarity_correlation(const ScenarioConfig& c, const PolarityDays& d, double loading, double sd_v) {
    const double lo = c.polarity_std_low, width = c.polarity_std_high - c.polarity_std_low;
    const double own_weight = std::sqrt(1.0 - loading * loading);
    double n = 0, sum_m = 0, sum_mm = 0, sum_z = 0, sum_zz = 0, sum_mz = 0;
    for (std::size_t i = 0; i < d.z.size(); ++i) {
        const auto begin = d.uniforms.begin() + static_cast<std::ptrdiff_t>(d.offset[i]);
        const auto end = d.uniforms.begin() + static_cast<std::ptrdiff_t>(d.offset[i + 1]);
        const double total = static_cast<double>(end - begin);
        if (total == 0) continue;
        const double sd = lo + width * normal_cdf(loading * d.z[i] + own_weight * d.own[i]);
        const double p = 0.5 * sd * sd;
        const double pos = static_cast<double>(std::lower_bound(begin, end, p) - begin);
        const double nonzero = static_cast<double>(std::lower_bound(begin, end, 2.0 * p) - begin);
        const double mean = (2.0 * pos - nonzero) / total;
        const double m2 = std::sqrt(std::max(0.0, nonzero / total - mean * mean));
        const double z = d.z[i];
        n += 1;
        sum_m += m2;
        sum_mm += m2 * m2;
        sum_z += z;
        sum_zz += z * z;
        sum_mz += m2 * z;
    }
    const double cov = sum_mz / n - (sum_m / n) * (sum_z / n);
    const double var_m = sum_mm / n - (sum_m / n) * (sum_m / n);
    const double var_z = sum_zz / n - (sum_z / n) * (sum_z / n);
    return c.log_variance_std * cov / std::sqrt(var_m * var_z) / sd_v;
}

std::vector<Date> weekday_calendar(Date start, int n) {
    std::vector<Date> days;
    for (Date d = start; static_cast<int>(days.size()) < n; d = d.next())
        if (!d.is_weekend()) days.push_back(d);
    return days;
}

}  // namespace

ScenarioConfig parse_scenario_json(const std::string& text) {
    const json obj = json::parse(text, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) throw ConfigError("scenario is not a JSON object");
    static const std::array<const char*, 22> known = {
        "seed",          "n_days",          "daily_vol_base",   "vol_persistence",     "activity_vol_corr",
        "sentiment_vol_corr", "base_tweet_rate", "intraday_steps", "symbol",           "start_date",
        "start_price",   "log_variance_std", "activity_dispersion", "media_fraction",  "retweet_fraction",
        "yolo1_vol_corr", "yolo2_vol_corr", "m_vol_corr",       "vix_vol_corr",        "polarity_std_low",
        "polarity_std_high", "comment"};
    for (const auto& [key, _] : obj.items())
        if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) == known.end())
            throw ConfigError("unknown scenario field '" + key + "'");

    ScenarioConfig c;
    read_field(obj, "seed", c.seed);
    read_field(obj, "n_days", c.n_days);
    read_field(obj, "daily_vol_base", c.daily_vol_base);
    read_field(obj, "vol_persistence", c.vol_persistence);
    read_field(obj, "activity_vol_corr", c.activity_vol_corr);
    read_field(obj, "sentiment_vol_corr", c.sentiment_vol_corr);
    read_field(obj, "base_tweet_rate", c.base_tweet_rate);
    read_field(obj, "intraday_steps", c.intraday_steps);
    read_field(obj, "symbol", c.symbol);
    std::string start;
    read_field(obj, "start_date", start);
    if (!start.empty()) c.start_date = Date::parse(start);
    read_field(obj, "start_price", c.start_price);
    read_field(obj, "log_variance_std", c.log_variance_std);
    read_field(obj, "activity_dispersion", c.activity_dispersion);
    read_field(obj, "media_fraction", c.media_fraction);
    read_field(obj, "retweet_fraction", c.retweet_fraction);
    read_field(obj, "yolo1_vol_corr", c.yolo1_vol_corr);
    read_field(obj, "yolo2_vol_corr", c.yolo2_vol_corr);
    read_field(obj, "m_vol_corr", c.m_vol_corr);
    read_field(obj, "vix_vol_corr", c.vix_vol_corr);
    read_field(obj, "polarity_std_low", c.polarity_std_low);
    read_field(obj, "polarity_std_high", c.polarity_std_high);
    validate(c);
    return c;
}

std::string scenario_to_json(const ScenarioConfig& c) {
    json obj = {{"seed", c.seed},
                {"n_days", c.n_days},
                {"daily_vol_base", c.daily_vol_base},
                {"vol_persistence", c.vol_persistence},
                {"activity_vol_corr", c.activity_vol_corr},
                {"sentiment_vol_corr", c.sentiment_vol_corr},
                {"base_tweet_rate", c.base_tweet_rate},
                {"intraday_steps", c.intraday_steps},
                {"symbol", c.symbol},
                {"start_date", c.start_date.to_string()},
                {"start_price", c.start_price},
                {"log_variance_std", c.log_variance_std},
                {"activity_dispersion", c.activity_dispersion},
                {"media_fraction", c.media_fraction},
                {"retweet_fraction", c.retweet_fraction},
                {"yolo1_vol_corr", c.yolo1_vol_corr},
                {"yolo2_vol_corr", c.yolo2_vol_corr},
                {"m_vol_corr", c.m_vol_corr},
                {"vix_vol_corr", c.vix_vol_corr},
                {"polarity_std_low", c.polarity_std_low},
                {"polarity_std_high", c.polarity_std_high}};
    return obj.dump(2);
}

Calibration calibrate(const ScenarioConfig& c) {
    validate(c);
    Calibration cal;
    const double s = c.log_variance_std;
    cal.estimator_noise_var = estimator_noise_variance(c);
    const double sd_v = std::sqrt(s * s + cal.estimator_noise_var);
    cal.v_latent_corr = s / sd_v;
    const double kappa = cal.v_latent_corr;

    auto loading = [&](double target, const char* what) {
        const double l = target / kappa;
        if (std::fabs(l) >= 1.0)
            throw ConfigError(std::string("infeasible correlation target for ") + what + ": |" +
                              std::to_string(target) + "| must stay below Corr(V, latent) = " +
                              std::to_string(kappa));
        return l;
    };
    cal.yolo1_loading = loading(c.yolo1_vol_corr, "YOLO1");
    cal.yolo2_loading = loading(c.yolo2_vol_corr, "YOLO2");
    cal.m_loading = loading(c.m_vol_corr, "M");
    cal.vix_loading = loading(c.vix_vol_corr, "VIX");

    // Weekday buckets hold one calendar day, Friday buckets three: mean 1/window = 13/15.
    constexpr double kWindowFactor = 13.0 / 15.0;
    const double q = c.activity_dispersion;
    const double inv_rate = kWindowFactor * std::exp(0.5 * q * q) / c.base_tweet_rate;

    // MOON1 = ln(mean count) ~ a z + b xi + Poisson noise of variance ~ E[1/lambda].
    const double a = loading(c.activity_vol_corr, "MOON1") * std::sqrt(q * q + inv_rate);
    if (std::fabs(a) >= q)
        throw ConfigError("infeasible correlation target for MOON1: Poisson noise caps the attainable correlation");
    cal.activity_loading = a;
    cal.activity_noise = std::sqrt(q * q - a * a);

    // MOON2 is a small-sample std of a few non-neutral tweets; its coupling to V is
    // found by simulating the day-level mechanism and solving for the loading.
    const double target = c.sentiment_vol_corr;
    const auto draws = draw_polarity_days(c, cal);
    const double lo_corr = polarity_correlation(c, draws, -0.999, sd_v);
    const double hi_corr = polarity_correlation(c, draws, 0.999, sd_v);
    if (target <= std::min(lo_corr, hi_corr) || target >= std::max(lo_corr, hi_corr))
        throw ConfigError("infeasible correlation target for MOON2: " + std::to_string(target) +
                          " is outside the attainable range of the polarity band");
    double left = -0.999, right = 0.999;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (left + right);
        if ((polarity_correlation(c, draws, mid, sd_v) < target) == (lo_corr < hi_corr))
            left = mid;
        else
            right = mid;
    }
    const double polarity = 0.5 * (left + right);
    cal.polarity_loading = polarity;
    return cal;
}

std::string synthetic_tweet_text(Rng& rng, int ternary, const std::string& symbol) {
    static constexpr std::array<const char*, 8> positive = {
        "$%s holding strong",        "love $%s",         "$%s is a great buy",   "$%s very good gains today",
        "$%s not bad at all",        "$%s to the moon! amazing", "happy with my $%s profit", "$%s WIN"};
    static constexpr std::array<const char*, 7> negative = {
        "$%s is a scam",        "sold $%s, terrible day", "$%s crash incoming", "hate this $%s dump",
        "$%s not good",         "$%s bagholders are sad", "$%s LOSS"};
    static constexpr std::array<const char*, 7> neutral = {
        "$%s opens at the bell", "watching $%s today",  "what is $%s doing", "$%s volume update",
        "anyone trading $%s?",   "$%s chart for today", "$%s!!"};
    const char* tmpl = ternary > 0   ? positive[rng.below(positive.size())]
                       : ternary < 0 ? negative[rng.below(negative.size())]
                                     : neutral[rng.below(neutral.size())];
    std::string out;
    for (const char* p = tmpl; *p; ++p) {
        if (p[0] == '%' && p[1] == 's') {
            out += symbol;
            ++p;
        } else {
            out += *p;
        }
    }
    return out;
}

Scenario simulate_scenario(const ScenarioConfig& config) {
    Scenario sc;
    sc.config = config;
    sc.calibration = calibrate(config);
    const auto& cal = sc.calibration;
    const auto& c = config;
    Rng rng(c.seed);

    const auto days = weekday_calendar(c.start_date, c.n_days);
    const auto n = days.size();
    const double phi = c.vol_persistence;
    const double innovation = std::sqrt(1.0 - phi * phi);
    auto mix = [](double loading, double common, double own) {
        return loading * common + std::sqrt(1.0 - loading * loading) * own;
    };

    // Per trading day: latent state, activity and polarity factors, exogenous series, bar.
    std::vector<double> log_rate(n), polarity_std(n);
    ExogenousSeries vix{SeriesName::vix, {}}, yolo1{SeriesName::yolo1, {}}, yolo2{SeriesName::yolo2, {}},
        m{SeriesName::m, {}};
    sc.latent.resize(n);
    double open = c.start_price;
    const double s = c.log_variance_std;
    for (std::size_t t = 0; t < n; ++t) {
        const double z = t == 0 ? rng.normal() : phi * sc.latent[t - 1] + innovation * rng.normal();
        sc.latent[t] = z;
        log_rate[t] = std::log(c.base_tweet_rate) + cal.activity_loading * z + cal.activity_noise * rng.normal();
        polarity_std[t] = c.polarity_std_low +
                          (c.polarity_std_high - c.polarity_std_low) * normal_cdf(mix(cal.polarity_loading, z, rng.normal()));
        yolo1.points.emplace_back(days[t], 4.0 + 1.5 * mix(cal.yolo1_loading, z, rng.normal()));
        yolo2.points.emplace_back(days[t], 30.0 + 12.0 * mix(cal.yolo2_loading, z, rng.normal()));
        vix.points.emplace_back(days[t], 25.0 + 5.0 * mix(cal.vix_loading, z, rng.normal()));

        const double variance = c.daily_vol_base * c.daily_vol_base * std::exp(s * z - 0.5 * s * s);
        sc.bars.push_back(gbm_day(rng, days[t], open, variance, c.intraday_steps));
        open = sc.bars.back().close;
    }

    // Per calendar day: tweets (weekends inherit Friday's state) and the daily M series.
    std::uint64_t next_id = 1'000'000'000ULL;
    std::size_t t = 0;
    for (Date d = days.front(); d <= days.back(); d = d.next()) {
        while (t + 1 < n && days[t + 1] <= d) ++t;
        m.points.emplace_back(d, 40.0 + 10.0 * mix(cal.m_loading, sc.latent[t], rng.normal()));

        const auto count = rng.poisson(std::exp(log_rate[t]));
        const double sd = polarity_std[t];
        const double p_pos = 0.5 * sd * sd;
        std::vector<std::int64_t> seconds(count);
        for (auto& sec : seconds) sec = 3 * 3600 + static_cast<std::int64_t>(rng.below(21 * 3600));
        std::sort(seconds.begin(), seconds.end());
        for (auto sec : seconds) {
            TweetRecord tw;
            tw.id = std::to_string(next_id++);
            tw.created_at = exchange_local_to_utc(d, std::chrono::seconds{sec});
            const double u = rng.uniform();
            const int ternary = u < p_pos ? 1 : (u < 2.0 * p_pos ? -1 : 0);
            tw.text = synthetic_tweet_text(rng, ternary, c.symbol);
            tw.has_media = rng.uniform() < c.media_fraction;
            tw.is_retweet = rng.uniform() < c.retweet_fraction;
            tw.metrics.like_count = rng.poisson(5.0);
            tw.metrics.retweet_count = rng.poisson(1.0);
            tw.metrics.quote_count = rng.poisson(0.3);
            tw.metrics.reply_count = rng.poisson(1.0);
            sc.tweets.push_back(std::move(tw));
        }
    }

    sc.exogenous = {std::move(vix), std::move(m), std::move(yolo1), std::move(yolo2)};
    return sc;
}

}  // namespace moonvol
