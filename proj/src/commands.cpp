#include "moonvol/commands.hpp"

#include "moonvol/csv.hpp"
#include "moonvol/error.hpp"
#include "moonvol/regress.hpp"
#include "moonvol/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace moonvol::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kCorrelationColumns = {"v", "moon1", "moon2", "yolo1", "yolo2"};

std::ifstream open_input(const std::string& path, const std::string& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(what + " not found: " + path);
    return in;
}

std::string read_text(const std::string& path, const std::string& what) {
    auto in = open_input(path, what);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Files written by one command. Unless commit() is called, the destructor removes
/// them again (and the directory, when this command created it).
class OutputDir {
public:
    explicit OutputDir(const std::string& dir) : dir_(dir.empty() ? "." : dir) {
        if (!fs::exists(dir_)) {
            std::error_code ec;
            fs::create_directories(dir_, ec);
            if (ec) throw Error("cannot create output directory " + dir_.string() + ": " + ec.message());
            created_ = true;
        } else if (!fs::is_directory(dir_)) {
            throw Error("output path is not a directory: " + dir_.string());
        }
    }
    OutputDir(const OutputDir&) = delete;
    OutputDir& operator=(const OutputDir&) = delete;

    ~OutputDir() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
        if (created_) fs::remove(dir_, ec);
    }

    void write(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + path.string());
        written_.push_back(path);
        out << content;
        if (!out.flush()) throw Error("write failed: " + path.string());
    }

    /// Writes manifest.json describing this run.
    void write_manifest(const std::string& command, const std::map<std::string, std::string>& config,
                        const std::vector<std::string>& inputs) {
        json inputs_json = json::object();
        for (const auto& p : inputs)
            if (!p.empty()) inputs_json[p] = file_digest(p);
        const auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
        json manifest = {{"command", command},
                         {"config", config},
                         {"inputs", inputs_json},
                         {"tool_version", MOONVOL_VERSION},
                         {"timestamp", format_utc_timestamp(now)}};
        write("manifest.json", manifest.dump(2) + "\n");
    }

    void commit() { committed_ = true; }
    const fs::path& path() const { return dir_; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool created_ = false;
    bool committed_ = false;
};

/// Prefixes failures with the stage name, keeping the user/internal distinction.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(std::string(name) + ": " + e.what());
    } catch (const std::exception& e) {
        throw InternalError(std::string(name) + ": " + e.what());
    }
}

std::string rs_form_name(RsForm f) { return f == RsForm::standard ? "standard" : "paper-minus"; }

std::string aggregator_name(Aggregator a) {
    switch (a) {
        case Aggregator::std_dev: return "std";
        case Aggregator::mean: return "mean";
        case Aggregator::weighted: return "weighted";
        case Aggregator::ratio: return "ratio";
    }
    return "?";
}

std::map<std::string, std::string> feature_config(const FeatureOptions& o) {
    return {{"rs_form", rs_form_name(o.volatility.rs_form)},
            {"include_overnight", o.volatility.include_overnight ? "true" : "false"},
            {"merge", o.merge == MergeDirection::previous ? "previous" : "forward"},
            {"aggregator", aggregator_name(o.aggregator)},
            {"thresholds", csv::format_double(o.thresholds.negative) + " " + csv::format_double(o.thresholds.positive)},
            {"log_base", o.log_base == LogBase::e ? "e" : "10"},
            {"sentiment_rules", std::string(scorer_rule_summary())}};
}

std::vector<std::string> input_list(const InputPaths& in) {
    std::vector<std::string> out = {in.ohlc, in.tweets, in.lexicon, in.calendar};
    for (const auto& [_, p] : in.exogenous) out.push_back(p);
    return out;
}

struct LoadedInputs {
    std::vector<OhlcBar> bars;
    std::vector<TweetRecord> tweets;
    std::vector<ExogenousSeries> exogenous;
    std::optional<TradingCalendar> calendar;
};

LoadedInputs load_inputs(const InputPaths& paths) {
    LoadedInputs li;
    if (paths.ohlc.empty()) throw Error("missing --ohlc");
    if (paths.tweets.empty()) throw Error("missing --tweets");
    {
        auto in = open_input(paths.ohlc, "OHLC file");
        try {
            li.bars = parse_ohlc_csv(in);
        } catch (const Error& e) {
            throw Error(paths.ohlc + ": " + e.what());
        }
    }
    {
        auto in = open_input(paths.tweets, "tweets file");
        try {
            li.tweets = parse_tweets_jsonl(in);
        } catch (const Error& e) {
            throw Error(paths.tweets + ": " + e.what());
        }
    }
    for (const auto& [name, path] : paths.exogenous) {
        auto in = open_input(path, to_string(name) + " file");
        try {
            li.exogenous.push_back(parse_exogenous_csv(in, name));
        } catch (const Error& e) {
            throw Error(path + ": " + e.what());
        }
    }
    if (!paths.calendar.empty()) {
        auto in = open_input(paths.calendar, "calendar file");
        li.calendar = parse_calendar(in);
    }
    return li;
}

void require_all_exogenous(const InputPaths& paths) {
    for (auto name : {SeriesName::vix, SeriesName::m, SeriesName::yolo1, SeriesName::yolo2}) {
        bool found = false;
        for (const auto& [n, _] : paths.exogenous) found = found || n == name;
        if (!found) throw Error("missing exogenous series " + to_string(name) + " (use --exog " + to_string(name) + "=PATH)");
    }
}

std::string signal_csv(const std::vector<DailySignalRow>& rows) {
    std::ostringstream ss;
    write_signal_table_csv(ss, rows);
    return ss.str();
}

std::string drops_text(const DropLog& drops) {
    std::ostringstream ss;
    write_drop_log(ss, drops);
    return ss.str();
}

std::string plot_csv(const std::vector<DailySignalRow>& rows) {
    const auto moon1 = normalize_unit_interval(signal_column(rows, "moon1"));
    const auto moon2 = normalize_unit_interval(signal_column(rows, "moon2"));
    std::ostringstream ss;
    ss << "date,moon1_norm,moon2_norm,v\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        ss << rows[i].date.to_string() << ',' << csv::format_double(moon1[i]) << ','
           << csv::format_double(moon2[i]) << ',' << csv::format_double(rows[i].v) << '\n';
    return ss.str();
}

struct StockFit {
    std::string symbol;
    std::vector<FitResult> fits;
    CorrelationMatrix correlations;
};

StockFit fit_stock(const std::string& symbol, const std::vector<DailySignalRow>& rows) {
    return {symbol, fit_suite(rows), pearson_matrix(rows, kCorrelationColumns)};
}

std::string r2_csv(const std::vector<StockFit>& stocks) {
    std::ostringstream ss;
    ss << "symbol";
    for (const auto& spec : model_suite()) ss << ',' << spec.name;
    ss << '\n';
    for (const auto& s : stocks) {
        ss << csv::escape(s.symbol);
        for (const auto& f : s.fits) ss << ',' << csv::format_double(f.r_squared);
        ss << '\n';
    }
    return ss.str();
}

// Upper triangle in the layout: rows v..yolo1, columns moon1..yolo2.
std::string correlations_csv(const std::vector<StockFit>& stocks) {
    std::ostringstream ss;
    ss << "symbol,row";
    for (std::size_t j = 1; j < kCorrelationColumns.size(); ++j) ss << ',' << kCorrelationColumns[j];
    ss << '\n';
    for (const auto& s : stocks) {
        for (std::size_t i = 0; i + 1 < kCorrelationColumns.size(); ++i) {
            ss << csv::escape(s.symbol) << ',' << kCorrelationColumns[i];
            for (std::size_t j = 1; j < kCorrelationColumns.size(); ++j) {
                ss << ',';
                if (j > i)
                    ss << csv::format_double(s.correlations.values(static_cast<Eigen::Index>(i),
                                                                   static_cast<Eigen::Index>(j)));
            }
            ss << '\n';
        }
    }
    return ss.str();
}

std::string coefficients_json(const std::vector<StockFit>& stocks) {
    json root = json::object();
    for (const auto& s : stocks) {
        json models = json::object();
        for (const auto& f : s.fits) {
            json coef = json::object();
            for (std::size_t k = 0; k < f.columns.size(); ++k)
                coef[f.columns[k]] = f.coefficients(static_cast<Eigen::Index>(k));
            models[f.model] = {{"n_obs", f.n_obs}, {"r_squared", f.r_squared}, {"coefficients", coef}};
        }
        root[s.symbol] = models;
    }
    return root.dump(2) + "\n";
}

void write_fit_outputs(OutputDir& out, const std::vector<StockFit>& stocks, bool coefficients) {
    out.write("r2.csv", r2_csv(stocks));
    out.write("correlations.csv", correlations_csv(stocks));
    if (coefficients) out.write("coefficients.json", coefficients_json(stocks));
}

}  // namespace

void InputPaths::fill_from_dir(const std::string& dir) {
    const fs::path base(dir);
    if (ohlc.empty()) ohlc = (base / "ohlc.csv").string();
    if (tweets.empty()) tweets = (base / "tweets.jsonl").string();
    for (auto name : {SeriesName::vix, SeriesName::m, SeriesName::yolo1, SeriesName::yolo2}) {
        bool found = false;
        for (const auto& [n, _] : exogenous) found = found || n == name;
        if (!found) exogenous.emplace_back(name, (base / ("exog_" + to_string(name) + ".csv")).string());
    }
}

std::string file_digest(const std::string& path) {
    const auto bytes = read_text(path, "input");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_fixed3(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    std::string s = buf;
    if (s == "-0.000") s = "0.000";
    return s;
}

void cmd_ingest(const IngestArgs& args, std::ostream& log) {
    auto li = load_inputs(args.inputs);
    const auto calendar = li.calendar ? *li.calendar : TradingCalendar::from_bars(li.bars);
    OutputDir out(args.out_dir);
    {
        std::ostringstream ss;
        write_ohlc_csv(ss, li.bars);
        out.write("ohlc.csv", ss.str());
    }
    {
        std::ostringstream ss;
        write_tweets_jsonl(ss, li.tweets);
        out.write("tweets.jsonl", ss.str());
    }
    {
        std::ostringstream ss;
        for (Date d : calendar.days()) ss << d.to_string() << '\n';
        out.write("calendar.txt", ss.str());
    }
    for (const auto& s : li.exogenous) {
        std::ostringstream ss;
        write_exogenous_csv(ss, align_to_calendar(s, calendar));
        out.write("exog_" + to_string(s.name) + ".csv", ss.str());
    }
    out.write_manifest("ingest", {}, input_list(args.inputs));
    out.commit();
    log << "ingest: " << li.bars.size() << " bars, " << li.tweets.size() << " tweets ("
        << filter_for_sentiment(li.tweets).size() << " text-only), " << calendar.size() << " trading days, "
        << li.exogenous.size() << " exogenous series\n";
}

void cmd_score(const ScoreArgs& args, std::ostream& log) {
    const auto lexicon = Lexicon::load_file(args.lexicon);
    auto in = open_input(args.tweets, "tweets file");
    const auto records = filter_for_sentiment(parse_tweets_jsonl(in));
    std::ostringstream ss;
    ss << "id,compound,ternary\n";
    for (const auto& [id, score] : score_batch(records, lexicon, args.thresholds))
        ss << csv::escape(id) << ',' << csv::format_double(score.compound) << ',' << score.ternary << '\n';
    OutputDir out(args.out_dir);
    out.write("scores.csv", ss.str());
    out.write_manifest("score",
                       {{"thresholds", csv::format_double(args.thresholds.negative) + " " +
                                           csv::format_double(args.thresholds.positive)},
                        {"sentiment_rules", std::string(scorer_rule_summary())}},
                       {args.tweets, args.lexicon});
    out.commit();
    log << "score: " << records.size() << " text-only tweets scored\n";
}

void cmd_vol(const VolArgs& args, std::ostream& log) {
    auto in = open_input(args.ohlc, "OHLC file");
    const auto bars = parse_ohlc_csv(in);
    const auto series = volatility_series(bars, args.options);
    std::ostringstream ss;
    ss << "date,parkinson,gk,rs,composite,log_vol\n";
    for (const auto& d : series.days) {
        const auto& v = d.variance;
        ss << d.date.to_string();
        for (double x : {v.parkinson, v.garman_klass, v.rogers_satchell, v.composite, v.log_vol})
            ss << ',' << csv::format_double(x);
        ss << '\n';
    }
    DropLog drops;
    for (const auto& d : series.dropped) drops.push_back({d.date, "v", d.reason});
    OutputDir out(args.out_dir);
    out.write("vol.csv", ss.str());
    out.write("drops.log", drops_text(drops));
    out.write_manifest("vol",
                       {{"rs_form", rs_form_name(args.options.rs_form)},
                        {"include_overnight", args.options.include_overnight ? "true" : "false"}},
                       {args.ohlc});
    out.commit();
    log << "vol: " << series.days.size() << " days, " << series.dropped.size() << " degenerate bars dropped\n";
}

void cmd_features(const FeaturesArgs& args, std::ostream& log) {
    require_all_exogenous(args.inputs);
    const auto lexicon = Lexicon::load_file(args.inputs.lexicon);
    const auto li = load_inputs(args.inputs);
    const auto result = build_features(li.bars, li.tweets, li.exogenous, lexicon, args.options, li.calendar);
    OutputDir out(args.out_dir);
    out.write("features.csv", signal_csv(result.table.rows));
    out.write("drops.log", drops_text(result.table.drops));
    out.write_manifest("features", feature_config(args.options), input_list(args.inputs));
    out.commit();
    log << "features: " << result.table.rows.size() << " rows, " << result.table.drops.size() << " dropped\n";
}

void cmd_fit(const FitArgs& args, std::ostream& log) {
    if (args.features.empty()) throw Error("no features files given");
    std::vector<StockFit> stocks;
    std::vector<std::string> inputs;
    for (const auto& [symbol, path] : args.features) {
        auto in = open_input(path, "features file");
        const auto rows = parse_signal_table_csv(in);
        stocks.push_back(fit_stock(symbol, rows));
        inputs.push_back(path);
        log << "fit: " << symbol << " n_obs=" << stocks.back().fits.front().n_obs << '\n';
    }
    OutputDir out(args.out_dir);
    write_fit_outputs(out, stocks, args.coefficients);
    out.write_manifest("fit", {{"coefficients", args.coefficients ? "true" : "false"}}, inputs);
    out.commit();
}

void cmd_simulate(const SimulateArgs& args, std::ostream& log) {
    auto config = parse_scenario_json(read_text(args.config_path, "scenario config"));
    if (args.n_days_override > 0) config.n_days = args.n_days_override;
    const auto sc = simulate_scenario(config);
    OutputDir out(args.out_dir);
    {
        std::ostringstream ss;
        write_ohlc_csv(ss, sc.bars);
        out.write("ohlc.csv", ss.str());
    }
    {
        std::ostringstream ss;
        write_tweets_jsonl(ss, sc.tweets);
        out.write("tweets.jsonl", ss.str());
    }
    for (const auto& s : sc.exogenous) {
        std::ostringstream ss;
        write_exogenous_csv(ss, s);
        out.write("exog_" + to_string(s.name) + ".csv", ss.str());
    }
    out.write("scenario.json", scenario_to_json(config) + "\n");
    const auto& cal = sc.calibration;
    out.write_manifest("simulate",
                       {{"seed", std::to_string(config.seed)},
                        {"n_days", std::to_string(config.n_days)},
                        {"v_latent_corr", csv::format_double(cal.v_latent_corr)},
                        {"estimator_noise_var", csv::format_double(cal.estimator_noise_var)}},
                       {args.config_path});
    out.commit();
    log << "simulate: " << sc.bars.size() << " bars, " << sc.tweets.size() << " tweets\n";
}

void cmd_pipeline(const PipelineArgs& args, std::ostream& log) {
    require_all_exogenous(args.inputs);
    const auto lexicon = stage("lexicon", [&] { return Lexicon::load_file(args.inputs.lexicon); });
    const auto li = stage("ingest", [&] { return load_inputs(args.inputs); });
    const auto features = stage("features", [&] {
        return build_features(li.bars, li.tweets, li.exogenous, lexicon, args.options, li.calendar);
    });
    const auto& rows = features.table.rows;
    const auto fitted = stage("fit", [&] { return fit_stock(args.symbol, rows); });
    const auto plot = stage("plot", [&] { return plot_csv(rows); });

    stage("write", [&] {
        OutputDir out(args.out_dir);
        out.write("features.csv", signal_csv(rows));
        out.write("drops.log", drops_text(features.table.drops));
        write_fit_outputs(out, {fitted}, args.coefficients);
        out.write("plotdata_" + args.symbol + ".csv", plot);
        auto config = feature_config(args.options);
        config["symbol"] = args.symbol;
        out.write_manifest("pipeline", config, input_list(args.inputs));
        out.commit();
    });
    log << "pipeline: " << rows.size() << " rows (" << features.table.drops.size() << " dropped), "
        << features.tweets_total << " tweets, " << features.tweets_scored << " scored\n";
}

std::string render_r2_table(const std::string& symbol, const std::vector<double>& r2) {
    const auto& suite = model_suite();
    std::ostringstream ss;
    ss << symbol << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-8s", "model");
    ss << buf;
    for (std::size_t k = 0; k < r2.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%8s", suite[k].name.c_str());
        ss << buf;
    }
    ss << '\n';
    std::snprintf(buf, sizeof buf, "%-8s", "R^2");
    ss << buf;
    std::vector<std::string> shown;
    for (double x : r2) {
        shown.push_back(format_fixed3(x));
        std::snprintf(buf, sizeof buf, "%8s", shown.back().c_str());
        ss << buf;
    }
    ss << '\n';

    // Best = every model whose displayed value equals the displayed maximum.
    const auto best = std::max_element(r2.begin(), r2.end()) - r2.begin();
    std::vector<std::string> winners;
    for (std::size_t k = 0; k < r2.size(); ++k)
        if (shown[k] == shown[static_cast<std::size_t>(best)]) winners.push_back(suite[k].name);
    ss << "best: ";
    for (std::size_t k = 0; k < winners.size(); ++k) ss << (k ? ", " : "") << winners[k];
    if (winners.size() > 1) ss << " (tie at displayed precision)";
    ss << '\n';
    return ss.str();
}

void cmd_report(const std::string& dir, std::ostream& out) {
    const fs::path base(dir);
    const auto r2_path = (base / "r2.csv").string();
    const auto corr_path = (base / "correlations.csv").string();
    auto r2_in = open_input(r2_path, "r2.csv");
    auto corr_in = open_input(corr_path, "correlations.csv");

    csv::Reader r2_reader(r2_in);
    auto header = r2_reader.next();
    if (!header) throw Error("r2.csv is empty");
    std::vector<std::string_view> expected = {"symbol"};
    for (const auto& spec : model_suite()) expected.push_back(spec.name);
    csv::expect_header(*header, expected);

    std::vector<std::pair<std::string, std::vector<double>>> stocks;
    while (auto rec = r2_reader.next()) {
        if (rec->size() != expected.size())
            throw ParseError("r2.csv: expected " + std::to_string(expected.size()) + " fields", r2_reader.line());
        std::vector<double> r2;
        for (std::size_t k = 1; k < rec->size(); ++k)
            r2.push_back(csv::parse_double((*rec)[k], "R^2", r2_reader.line()));
        stocks.emplace_back((*rec)[0], std::move(r2));
    }
    if (stocks.empty()) throw Error("r2.csv has no rows");

    csv::Reader corr_reader(corr_in);
    auto corr_header = corr_reader.next();
    if (!corr_header) throw Error("correlations.csv is empty");
    csv::expect_header(*corr_header, {"symbol", "row", "moon1", "moon2", "yolo1", "yolo2"});
    std::map<std::string, std::vector<std::vector<std::string>>> corr_rows;
    while (auto rec = corr_reader.next()) {
        if (rec->size() != 6) throw ParseError("correlations.csv: expected 6 fields", corr_reader.line());
        corr_rows[(*rec)[0]].push_back(*rec);
    }

    for (std::size_t i = 0; i < stocks.size(); ++i) {
        if (i) out << '\n';
        out << render_r2_table(stocks[i].first, stocks[i].second);
        auto it = corr_rows.find(stocks[i].first);
        if (it == corr_rows.end()) continue;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-8s%8s%8s%8s%8s\n", "pearson", "moon1", "moon2", "yolo1", "yolo2");
        out << buf;
        for (const auto& rec : it->second) {
            std::snprintf(buf, sizeof buf, "%-8s", rec[1].c_str());
            out << buf;
            for (std::size_t k = 2; k < rec.size(); ++k) {
                const std::string cell =
                    rec[k].empty() ? "" : format_fixed3(csv::parse_double(rec[k], "correlation", corr_reader.line()));
                std::snprintf(buf, sizeof buf, "%8s", cell.c_str());
                out << buf;
            }
            out << '\n';
        }
    }
}

int run_guarded(const std::function<void()>& fn, std::ostream& err) {
    auto one_line = [](std::string s) {
        std::replace(s.begin(), s.end(), '\n', ' ');
        return s;
    };
    try {
        fn();
        return kExitOk;
    } catch (const Error& e) {
        err << "moonvol: error: " << one_line(e.what()) << '\n';
        return kExitUserError;
    } catch (const std::exception& e) {
        err << "moonvol: internal error: " << one_line(e.what()) << '\n';
        return kExitInternalError;
    }
}

}  // namespace moonvol::cli
