#pragma once

#include "moonvol/pipeline.hpp"

#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace moonvol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

/// Paths of the raw pipeline inputs.
struct InputPaths {
    std::string ohlc;
    std::string tweets;
    std::string lexicon;
    std::vector<std::pair<SeriesName, std::string>> exogenous;
    std::string calendar;  ///< empty: derive from the OHLC dates

    /// Fills unset paths with the file names `simulate` writes into `dir`.
    void fill_from_dir(const std::string& dir);
};

struct IngestArgs {
    InputPaths inputs;
    std::string out_dir;
};

struct ScoreArgs {
    std::string tweets;
    std::string lexicon;
    std::string out_dir;
    Thresholds thresholds;
};

struct VolArgs {
    std::string ohlc;
    std::string out_dir;
    VolatilityOptions options;
};

struct FeaturesArgs {
    InputPaths inputs;
    std::string out_dir;
    FeatureOptions options;
};

struct FitArgs {
    std::vector<std::pair<std::string, std::string>> features;  ///< symbol -> features.csv
    std::string out_dir;
    bool coefficients = false;
};

struct SimulateArgs {
    std::string config_path;
    std::string out_dir;
    int n_days_override = 0;  ///< 0 keeps the config value
};

struct PipelineArgs {
    InputPaths inputs;
    std::string symbol = "STOCK";
    std::string out_dir;
    FeatureOptions options;
    bool coefficients = false;
};

/// Each command throws moonvol::Error on user/data problems; `log` gets progress lines.
void cmd_ingest(const IngestArgs& args, std::ostream& log);
void cmd_score(const ScoreArgs& args, std::ostream& log);
void cmd_vol(const VolArgs& args, std::ostream& log);
void cmd_features(const FeaturesArgs& args, std::ostream& log);
void cmd_fit(const FitArgs& args, std::ostream& log);
void cmd_simulate(const SimulateArgs& args, std::ostream& log);
void cmd_pipeline(const PipelineArgs& args, std::ostream& log);

/// Renders r2.csv and correlations.csv from `dir` as aligned text tables.
void cmd_report(const std::string& dir, std::ostream& out);

/// Runs `fn`, printing one diagnostic line to `err` on failure; returns the exit status.
int run_guarded(const std::function<void()>& fn, std::ostream& err);

/// Text table for one stock's R^2 row, with the best model(s) flagged.
std::string render_r2_table(const std::string& symbol, const std::vector<double>& r2);

std::string format_fixed3(double x);

/// 64-bit FNV-1a of a file's bytes as "fnv1a64:<hex>".
std::string file_digest(const std::string& path);

}  // namespace moonvol::cli
