// End-to-end checks of the moonvol binary.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const std::string kLexicon = std::string(MOONVOL_DATA_DIR) + "/lexicon/demo_lexicon.tsv";

struct Run {
    int status;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(MOONVOL_SCRATCH_DIR) / ("cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Run run(const std::string& args, const fs::path& dir) {
    const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + MOONVOL_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

/// Small simulated dataset shared by the tests below.
fs::path dataset() {
    static const fs::path dir = [] {
        const auto d = scratch("data");
        std::ofstream(d / "scenario.json") << R"({"n_days": 60, "base_tweet_rate": 15, "intraday_steps": 100})";
        const auto r = run("simulate --config \"" + (d / "scenario.json").string() + "\" --out \"" +
                               (d / "sim").string() + "\"",
                           d);
        REQUIRE(r.status == 0);
        return d / "sim";
    }();
    return dir;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("cli: pipeline writes every artifact") {
    const auto dir = scratch("pipeline");
    const auto r = run("pipeline --data-dir \"" + dataset().string() + "\" --lexicon \"" + kLexicon +
                           "\" --symbol GME --out \"" + (dir / "out").string() + "\" --coefficients",
                       dir);
    REQUIRE(r.status == 0);
    for (const char* f : {"features.csv", "r2.csv", "correlations.csv", "plotdata_GME.csv", "drops.log",
                          "manifest.json", "coefficients.json"})
        CHECK(fs::exists(dir / "out" / f));
    CHECK(slurp(dir / "out" / "plotdata_GME.csv").rfind("date,moon1_norm,moon2_norm,v\n", 0) == 0);
    CHECK(slurp(dir / "out" / "manifest.json").find("\"command\": \"pipeline\"") != std::string::npos);

    const auto again = run("pipeline --data-dir \"" + dataset().string() + "\" --lexicon \"" + kLexicon +
                               "\" --symbol GME --out \"" + (dir / "again").string() + "\"",
                           dir);
    REQUIRE(again.status == 0);
    for (const char* f : {"features.csv", "r2.csv", "correlations.csv", "plotdata_GME.csv", "drops.log"})
        CHECK(slurp(dir / "out" / f) == slurp(dir / "again" / f));

    const auto report = run("report \"" + (dir / "out").string() + "\"", dir);
    CHECK(report.status == 0);
    CHECK(report.out.find("best: ") != std::string::npos);
    CHECK(report.out.find("pearson") != std::string::npos);
}

TEST_CASE("cli: missing lexicon") {
    const auto dir = scratch("nolex");
    const auto r = run("pipeline --data-dir \"" + dataset().string() +
                           "\" --lexicon /nonexistent/lexicon.tsv --out \"" + (dir / "out").string() + "\"",
                       dir);
    CHECK(r.status == 1);
    CHECK(r.err.find("lexicon not found") != std::string::npos);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("cli: empty tweets file fails at the feature stage") {
    const auto dir = scratch("empty");
    write_file(dir / "tweets.jsonl", "");
    const auto r = run("pipeline --data-dir \"" + dataset().string() + "\" --tweets \"" +
                           (dir / "tweets.jsonl").string() + "\" --lexicon \"" + kLexicon + "\" --out \"" +
                           (dir / "out").string() + "\"",
                       dir);
    CHECK(r.status == 1);
    CHECK(r.err.find("features:") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("cli: partial outputs are removed from an existing directory") {
    const auto dir = scratch("partial");
    fs::create_directories(dir / "out");
    write_file(dir / "out" / "keep.txt", "mine");
    write_file(dir / "tweets.jsonl", "");
    const auto r = run("features --data-dir \"" + dataset().string() + "\" --tweets \"" +
                           (dir / "tweets.jsonl").string() + "\" --lexicon \"" + kLexicon + "\" --out \"" +
                           (dir / "out").string() + "\"",
                       dir);
    CHECK(r.status == 1);
    CHECK(fs::exists(dir / "out" / "keep.txt"));
    CHECK_FALSE(fs::exists(dir / "out" / "features.csv"));
}

TEST_CASE("cli: report") {
    const auto dir = scratch("report");
    const std::string corr = "symbol,row,moon1,moon2,yolo1,yolo2\n";

    fs::create_directories(dir / "best");
    write_file(dir / "best" / "r2.csv", "symbol,M1,M2,M3,M4,M5,M6,M7,M8\nGME,0.1,0.2,0.3,0.4,0.5,0.45,0.55,0.7\n");
    write_file(dir / "best" / "correlations.csv", corr);
    const auto best = run("report \"" + (dir / "best").string() + "\"", dir);
    CHECK(best.status == 0);
    CHECK(best.out.find("best: M8\n") != std::string::npos);
    CHECK(best.out.find("0.700") != std::string::npos);

    fs::create_directories(dir / "tie");
    write_file(dir / "tie" / "r2.csv",
               "symbol,M1,M2,M3,M4,M5,M6,M7,M8\nBB,0.1,0.2,0.3,0.4,0.5,0.45,0.7001,0.7003\n");
    write_file(dir / "tie" / "correlations.csv", corr);
    const auto tie = run("report \"" + (dir / "tie").string() + "\"", dir);
    CHECK(tie.status == 0);
    CHECK(tie.out.find("best: M7, M8 (tie at displayed precision)") != std::string::npos);

    fs::create_directories(dir / "empty");
    write_file(dir / "empty" / "r2.csv", "");
    write_file(dir / "empty" / "correlations.csv", corr);
    CHECK(run("report \"" + (dir / "empty").string() + "\"", dir).status == 1);

    CHECK(run("report \"" + (dir / "missing").string() + "\"", dir).status == 1);
}

TEST_CASE("cli: staged commands") {
    const auto dir = scratch("stages");
    const auto data = dataset();
    CHECK(run("ingest --data-dir \"" + data.string() + "\" --out \"" + (dir / "ingest").string() + "\"", dir).status ==
          0);
    CHECK(fs::exists(dir / "ingest" / "calendar.txt"));

    CHECK(run("vol --ohlc \"" + (data / "ohlc.csv").string() + "\" --rs-form paper-minus --out \"" +
                  (dir / "vol").string() + "\"",
              dir)
              .status == 0);
    CHECK(slurp(dir / "vol" / "vol.csv").rfind("date,parkinson,gk,rs,composite,log_vol\n", 0) == 0);

    CHECK(run("score --tweets \"" + (data / "tweets.jsonl").string() + "\" --lexicon \"" + kLexicon +
                  "\" --thresholds -0.1 0.1 --out \"" + (dir / "score").string() + "\"",
              dir)
              .status == 0);
    CHECK(slurp(dir / "score" / "scores.csv").rfind("id,compound,ternary\n", 0) == 0);

    CHECK(run("features --data-dir \"" + data.string() + "\" --lexicon \"" + kLexicon +
                  "\" --merge-forward --aggregator mean --log-base 10 --include-overnight --out \"" +
                  (dir / "features").string() + "\"",
              dir)
              .status == 0);
    CHECK(run("fit --features GME=\"" + (dir / "features" / "features.csv").string() + "\" --coefficients --out \"" +
                  (dir / "fit").string() + "\"",
              dir)
              .status == 0);
    CHECK(slurp(dir / "fit" / "r2.csv").rfind("symbol,M1,M2,M3,M4,M5,M6,M7,M8\nGME,", 0) == 0);

    CHECK(run("features --data-dir \"" + data.string() + "\" --lexicon \"" + kLexicon +
                  "\" --aggregator median --out \"" + (dir / "bad").string() + "\"",
              dir)
              .status == 1);
    CHECK(run("nonsense", dir).status == 1);
}
