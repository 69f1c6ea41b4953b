#include "moonvol/error.hpp"
#include "moonvol/sentiment.hpp"

#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>
#include <sstream>

using namespace moonvol;

namespace {

Lexicon small_lexicon() {
    Lexicon lex;
    lex.add_valence("good", 2.0);
    lex.add_valence("bad", -2.5);
    lex.add_booster("very", 0.293);
    lex.add_booster("barely", -0.293);
    lex.add_negator("not");
    lex.add_negator("never");
    return lex;
}

Lexicon demo_lexicon() { return Lexicon::load_file(std::string(MOONVOL_DATA_DIR) + "/lexicon/demo_lexicon.tsv"); }

double reference_compound(double s) {
    using R = boost::multiprecision::cpp_bin_float_50;
    const R x(s);
    return static_cast<double>(x / boost::multiprecision::sqrt(x * x + 15));
}

}  // namespace

TEST_CASE("tokenize") {
    const auto t = tokenize("GME to the MOON!!");
    REQUIRE(t.size() == 4);
    CHECK(t[0].text == "gme");
    CHECK(t[3].text == "moon");
    CHECK(t[3].all_caps);
    CHECK(t[3].exclamations == 2);
    CHECK_FALSE(t[1].all_caps);

    CHECK(tokenize("").empty());
    CHECK(tokenize("   \t\n").empty());

    const auto d = tokenize("don't sell");
    REQUIRE(d.size() == 2);
    CHECK(d[0].text == "don't");
    CHECK(d[1].text == "sell");

    const auto e = tokenize("(wow), :) !!!");
    REQUIRE(e.size() == 3);
    CHECK(e[0].text == "wow");
    CHECK(e[1].text == ":)");
    CHECK(e[2].exclamations == 3);
}

TEST_CASE("lexicon loading") {
    std::istringstream in("# comment\n"
                          "Good\t1.5\textra\n"
                          "good\t9\n"
                          "[boosters]\n"
                          "very\t0.293\n"
                          "[negators]\n"
                          "not\n");
    const auto lex = Lexicon::load(in);
    REQUIRE(lex.valence("good"));
    CHECK(*lex.valence("good") == 1.5);
    CHECK(*lex.booster("very") == 0.293);
    CHECK(lex.is_negator("not"));

    std::istringstream clash("good\t1\n[negators]\ngood\n");
    CHECK_THROWS_AS(Lexicon::load(clash), Error);

    try {
        Lexicon::load_file("/nonexistent/lexicon.tsv");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("lexicon not found") != std::string::npos);
    }
    CHECK(demo_lexicon().size() > 30);
}

TEST_CASE("normalization examples") {
    const auto lex = small_lexicon();
    const auto single = score_compound("good", lex);
    CHECK(single.compound == doctest::Approx(2.0 / std::sqrt(19.0)).epsilon(1e-15));
    CHECK(single.compound == doctest::Approx(0.4588).epsilon(1e-4));
    CHECK(single.label == SentimentLabel::positive);
    CHECK(single.ternary == 1);

    const auto none = score_compound("nothing to see here", lex);
    CHECK(none.compound == 0.0);
    CHECK(none.label == SentimentLabel::neutral);
    CHECK(none.ternary == 0);

    const auto negated = score_compound("not good", lex);
    CHECK(negated.compound == doctest::Approx(reference_compound(-1.48)).epsilon(1e-14));
    CHECK(negated.compound == doctest::Approx(-0.35696).epsilon(1e-4));
    CHECK(negated.ternary == -1);
}

TEST_CASE("modifier rules") {
    const auto lex = small_lexicon();
    CHECK(raw_valence_sum(tokenize("very good"), lex) == doctest::Approx(2.293));
    CHECK(raw_valence_sum(tokenize("very bad"), lex) == doctest::Approx(-2.793));
    CHECK(raw_valence_sum(tokenize("barely good"), lex) == doctest::Approx(1.707));
    CHECK(raw_valence_sum(tokenize("GOOD"), lex) == doctest::Approx(2.733));
    CHECK(raw_valence_sum(tokenize("BAD"), lex) == doctest::Approx(-3.233));
    CHECK(raw_valence_sum(tokenize("good!!"), lex) == doctest::Approx(2.584));
    CHECK(raw_valence_sum(tokenize("good!!!!!"), lex) == doctest::Approx(2.876));
    CHECK(raw_valence_sum(tokenize("bad!"), lex) == doctest::Approx(-2.792));
    // negator window covers the three preceding tokens only
    CHECK(raw_valence_sum(tokenize("not a b good"), lex) == doctest::Approx(-1.48));
    CHECK(raw_valence_sum(tokenize("not a b c good"), lex) == doctest::Approx(2.0));
    CHECK(raw_valence_sum(tokenize("not very good"), lex) == doctest::Approx(2.293 * -0.74));
}

TEST_CASE("threshold classification") {
    CHECK(classify(0.05).ternary == 1);
    CHECK(classify(-0.05).ternary == -1);
    CHECK(classify(0.0499).ternary == 0);
    Thresholds wide{-0.5, 0.5};
    CHECK(classify(0.3, wide).ternary == 0);
    CHECK(classify(0.3, wide).compound == 0.3);
}

TEST_CASE("batch scoring") {
    const auto lex = demo_lexicon();
    CHECK(score_batch({}, lex).empty());

    TweetRecord t;
    t.id = "a";
    t.text = "love this";
    const auto one = score_batch({t}, lex);
    REQUIRE(one.size() == 1);
    CHECK(one[0].first == "a");
    CHECK(one[0].second.ternary == 1);

    std::vector<TweetRecord> same(5, t);
    for (std::size_t i = 0; i < same.size(); ++i) same[i].id = std::to_string(i);
    const auto many = score_batch(same, lex);
    for (std::size_t i = 0; i < many.size(); ++i) {
        CHECK(many[i].first == std::to_string(i));
        CHECK(many[i].second.compound == one[0].second.compound);
    }
}

TEST_CASE("compound is monotone in the raw sum") {
    double prev = -1.0;
    for (double s = -50.0; s <= 50.0; s += 0.01) {
        const double c = normalize_compound(s);
        CHECK(c >= prev);
        CHECK(c >= -1.0);
        CHECK(c <= 1.0);
        prev = c;
    }
}

TEST_CASE("sign symmetry under a negated lexicon") {
    const auto lex = demo_lexicon();
    const auto neg = lex.negated();
    std::mt19937_64 gen(3);
    const std::vector<std::string> words = {"good", "BAD", "very", "not", "love", "crash!!", "the", "GME", "never",
                                            "great!", "barely", "scam", ":)", "moon", "extremely", "HATE"};
    for (int i = 0; i < 500; ++i) {
        std::string text;
        const auto len = 1 + gen() % 12;
        for (std::size_t k = 0; k < len; ++k) text += words[gen() % words.size()] + " ";
        CHECK(score_compound(text, neg).compound == -score_compound(text, lex).compound);
    }
}
