#pragma once

#include "moonvol/market_data.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace moonvol {

/// Seeded random source with portable transforms. The bit stream is std::mt19937_64,
/// whose output sequence is fixed by the C++ standard; every derived variate uses
/// the transforms below instead of the implementation-defined <random> distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1) from the top 53 bits.
    double uniform();
    /// Standard normal by inverse CDF of uniform().
    double normal();
    /// Poisson by inversion (mean < 10) or Hoermann's PTRS transformed rejection.
    std::uint64_t poisson(double mean);
    /// Integer in [0, n).
    std::size_t below(std::size_t n);

private:
    std::mt19937_64 engine_;
};

/// Acklam's rational approximation refined by one Halley step. p must lie in (0, 1).
double inverse_normal_cdf(double p);
double normal_cdf(double x);

/// How the daily high/low are read off a simulated path.
enum class ExtremeSampling {
    grid,    ///< max/min over the simulated points
    bridge,  ///< exact Brownian-bridge extremes between points (continuous monitoring)
};

/// Driftless log-price random walk of `steps` increments with total variance
/// `daily_variance`, starting at `open`.
OhlcBar gbm_day(Rng& rng, Date date, double open, double daily_variance, int steps,
                ExtremeSampling sampling = ExtremeSampling::grid);

struct ScenarioConfig {
    std::uint64_t seed = 20210127;
    int n_days = 250;               ///< trading days (Mon-Fri, no holidays)
    double daily_vol_base = 0.04;   ///< RMS daily volatility
    double vol_persistence = 0.8;   ///< AR(1) coefficient of the latent log-variance
    double activity_vol_corr = 0.699;
    double sentiment_vol_corr = -0.119;
    double base_tweet_rate = 50.0;  ///< median tweets per calendar day
    int intraday_steps = 390;

    std::string symbol = "GME";
    Date start_date{2020, 10, 1};
    double start_price = 20.0;
    double log_variance_std = 1.0;     ///< std of the latent log-variance
    double activity_dispersion = 1.0;  ///< std of the log tweet rate
    double media_fraction = 0.1;
    double retweet_fraction = 0.1;
    double yolo1_vol_corr = 0.762;
    double yolo2_vol_corr = 0.527;
    double m_vol_corr = 0.3;
    double vix_vol_corr = 0.2;
    double polarity_std_low = 0.3;
    double polarity_std_high = 0.9;
};

/// Reads a scenario JSON object; absent keys keep their defaults, unknown keys are errors.
ScenarioConfig parse_scenario_json(const std::string& text);
std::string scenario_to_json(const ScenarioConfig& config);

/// Factor loadings that make pipeline-measured correlations with V hit the targets.
struct Calibration {
    double estimator_noise_var = 0.0;  ///< Var(ln composite) at fixed true variance
    double v_latent_corr = 0.0;        ///< Corr(V, latent log-variance)
    double activity_loading = 0.0;
    double activity_noise = 0.0;
    double polarity_loading = 0.0;
    double yolo1_loading = 0.0;
    double yolo2_loading = 0.0;
    double m_loading = 0.0;
    double vix_loading = 0.0;
};

/// Validates the config and solves for the loadings. Throws ConfigError when a
/// target cannot be reached by any feasible one-factor correlation structure.
Calibration calibrate(const ScenarioConfig& config);

struct Scenario {
    ScenarioConfig config;
    Calibration calibration;
    std::vector<OhlcBar> bars;
    std::vector<TweetRecord> tweets;
    std::vector<ExogenousSeries> exogenous;  ///< VIX, M, YOLO1, YOLO2
    std::vector<double> latent;              ///< standardized latent log-variance per trading day
};

Scenario simulate_scenario(const ScenarioConfig& config);

/// Tweet text drawn from fixed templates whose ternary label under the bundled
/// demo lexicon equals `ternary`.
std::string synthetic_tweet_text(Rng& rng, int ternary, const std::string& symbol);

}  // namespace moonvol
