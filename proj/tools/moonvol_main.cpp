// moonvol command-line front end.
#include "moonvol/commands.hpp"
#include "moonvol/error.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace moonvol;
using namespace moonvol::cli;

namespace {

struct ToggleFlags {
    std::string rs_form = "standard";
    bool include_overnight = false;
    bool merge_forward = false;
    std::string aggregator = "std";
    std::vector<double> thresholds;
    std::string log_base = "e";
};

void add_volatility_flags(CLI::App* app, ToggleFlags& f) {
    app->add_option("--rs-form", f.rs_form, "Rogers-Satchell form")
        ->check(CLI::IsMember({"standard", "paper-minus"}));
    app->add_flag("--include-overnight", f.include_overnight, "add the squared overnight return");
}

void add_feature_flags(CLI::App* app, ToggleFlags& f) {
    add_volatility_flags(app, f);
    app->add_flag("--merge-forward", f.merge_forward, "merge non-trading days into the next trading day");
    app->add_option("--aggregator", f.aggregator, "daily sentiment aggregator")
        ->check(CLI::IsMember({"std", "mean", "weighted", "ratio"}));
    app->add_option("--thresholds", f.thresholds, "ternary thresholds <neg> <pos>")->expected(2);
    app->add_option("--log-base", f.log_base, "MOON1 logarithm base")->check(CLI::IsMember({"e", "10"}));
}

VolatilityOptions volatility_options(const ToggleFlags& f) {
    VolatilityOptions o;
    o.rs_form = f.rs_form == "paper-minus" ? RsForm::paper_minus : RsForm::standard;
    o.include_overnight = f.include_overnight;
    return o;
}

Thresholds thresholds(const ToggleFlags& f) {
    Thresholds t;
    if (f.thresholds.size() == 2) {
        t.negative = f.thresholds[0];
        t.positive = f.thresholds[1];
        if (!(t.negative < t.positive)) throw ConfigError("--thresholds: <neg> must be below <pos>");
    }
    return t;
}

FeatureOptions feature_options(const ToggleFlags& f) {
    FeatureOptions o;
    o.volatility = volatility_options(f);
    o.merge = f.merge_forward ? MergeDirection::next : MergeDirection::previous;
    o.log_base = f.log_base == "10" ? LogBase::ten : LogBase::e;
    if (f.aggregator == "mean") o.aggregator = Aggregator::mean;
    else if (f.aggregator == "weighted") o.aggregator = Aggregator::weighted;
    else if (f.aggregator == "ratio") o.aggregator = Aggregator::ratio;
    else o.aggregator = Aggregator::std_dev;
    o.thresholds = thresholds(f);
    return o;
}

struct InputFlags {
    InputPaths paths;
    std::string data_dir;
    std::vector<std::string> exog;
};

void add_input_flags(CLI::App* app, InputFlags& in, bool lexicon) {
    app->add_option("--data-dir", in.data_dir, "directory with ohlc.csv, tweets.jsonl and exog_<NAME>.csv");
    app->add_option("--ohlc", in.paths.ohlc, "daily OHLC CSV");
    app->add_option("--tweets", in.paths.tweets, "tweets JSONL");
    app->add_option("--exog", in.exog, "exogenous series NAME=PATH (VIX, M, YOLO1, YOLO2)");
    app->add_option("--calendar", in.paths.calendar, "trading calendar, one date per line");
    if (lexicon) app->add_option("--lexicon", in.paths.lexicon, "sentiment lexicon TSV")->required();
}

InputPaths resolve_inputs(InputFlags in) {
    for (const auto& spec : in.exog) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw ConfigError("--exog expects NAME=PATH, got '" + spec + "'");
        in.paths.exogenous.emplace_back(parse_series_name(spec.substr(0, eq)), spec.substr(eq + 1));
    }
    if (!in.data_dir.empty()) in.paths.fill_from_dir(in.data_dir);
    return in.paths;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moonvol: tweet activity and sentiment against range-based stock volatility"};
    app.set_version_flag("--version", std::string(MOONVOL_VERSION));
    app.require_subcommand(1);

    ToggleFlags toggles;
    InputFlags inputs;
    std::string out_dir = ".";
    std::string symbol = "STOCK";
    bool coefficients = false;

    auto* ingest = app.add_subcommand("ingest", "validate and normalize raw inputs");
    add_input_flags(ingest, inputs, false);
    ingest->add_option("--out", out_dir, "output directory");

    std::string score_tweets, score_lexicon;
    auto* score = app.add_subcommand("score", "score text-only tweets");
    score->add_option("--tweets", score_tweets, "tweets JSONL")->required();
    score->add_option("--lexicon", score_lexicon, "sentiment lexicon TSV")->required();
    score->add_option("--thresholds", toggles.thresholds, "ternary thresholds <neg> <pos>")->expected(2);
    score->add_option("--out", out_dir, "output directory");

    std::string vol_ohlc;
    auto* vol = app.add_subcommand("vol", "daily range-based volatility");
    vol->add_option("--ohlc", vol_ohlc, "daily OHLC CSV")->required();
    add_volatility_flags(vol, toggles);
    vol->add_option("--out", out_dir, "output directory");

    auto* features = app.add_subcommand("features", "build the daily signal table");
    add_input_flags(features, inputs, true);
    add_feature_flags(features, toggles);
    features->add_option("--out", out_dir, "output directory");

    std::vector<std::string> fit_inputs;
    auto* fit = app.add_subcommand("fit", "fit the M1..M8 suite");
    fit->add_option("--features", fit_inputs, "SYMBOL=features.csv (repeatable)")->required();
    fit->add_option("--out", out_dir, "output directory");
    fit->add_flag("--coefficients", coefficients, "also write coefficients.json");

    std::string report_dir = ".";
    auto* report = app.add_subcommand("report", "print R^2 and correlation tables");
    report->add_option("dir", report_dir, "directory with r2.csv and correlations.csv");

    std::string sim_config;
    int sim_days = 0;
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic scenario");
    simulate->add_option("--config", sim_config, "scenario JSON")->required();
    simulate->add_option("--days", sim_days, "override n_days")->check(CLI::PositiveNumber);
    simulate->add_option("--out", out_dir, "output directory");

    auto* pipeline = app.add_subcommand("pipeline", "features, fit and plot data in one run");
    add_input_flags(pipeline, inputs, true);
    add_feature_flags(pipeline, toggles);
    pipeline->add_option("--symbol", symbol, "stock symbol used in outputs");
    pipeline->add_option("--out", out_dir, "output directory");
    pipeline->add_flag("--coefficients", coefficients, "also write coefficients.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUserError;
    }

    return run_guarded(
        [&] {
            if (ingest->parsed()) {
                cmd_ingest({resolve_inputs(inputs), out_dir}, std::cerr);
            } else if (score->parsed()) {
                cmd_score({score_tweets, score_lexicon, out_dir, thresholds(toggles)}, std::cerr);
            } else if (vol->parsed()) {
                cmd_vol({vol_ohlc, out_dir, volatility_options(toggles)}, std::cerr);
            } else if (features->parsed()) {
                cmd_features({resolve_inputs(inputs), out_dir, feature_options(toggles)}, std::cerr);
            } else if (fit->parsed()) {
                FitArgs args{{}, out_dir, coefficients};
                for (const auto& spec : fit_inputs) {
                    const auto eq = spec.find('=');
                    if (eq == std::string::npos)
                        args.features.emplace_back("STOCK", spec);
                    else
                        args.features.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
                }
                cmd_fit(args, std::cerr);
            } else if (report->parsed()) {
                cmd_report(report_dir, std::cout);
            } else if (simulate->parsed()) {
                cmd_simulate({sim_config, out_dir, sim_days}, std::cerr);
            } else if (pipeline->parsed()) {
                PipelineArgs args;
                args.inputs = resolve_inputs(inputs);
                args.symbol = symbol;
                args.out_dir = out_dir;
                args.options = feature_options(toggles);
                args.coefficients = coefficients;
                cmd_pipeline(args, std::cerr);
            }
        },
        std::cerr);
}
