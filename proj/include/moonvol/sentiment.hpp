#pragma once

#include "moonvol/market_data.hpp"

#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace moonvol {

/// Token tables consulted by the scorer. Tokens are lower-case and each token
/// lives in at most one table.
class Lexicon {
public:
    Lexicon() = default;

    /// Reads `token<TAB>valence[<TAB>...]` lines. A bare `[boosters]` line switches to
    /// `token<TAB>increment` entries, `[negators]` to one token per line, and
    /// `[valences]` back again. Extra columns (as in the published VADER file) are
    /// ignored, tokens are lower-cased, and the first spelling of a case-folded
    /// duplicate wins. Lines starting with `#` and no tab are comments.
    static Lexicon load(std::istream& in);
    static Lexicon load_file(const std::string& path);

    void add_valence(std::string token, double valence);
    void add_booster(std::string token, double increment);
    void add_negator(std::string token);

    const double* valence(std::string_view token) const;
    const double* booster(std::string_view token) const;
    bool is_negator(std::string_view token) const;

    std::size_t size() const { return valences_.size() + boosters_.size() + negators_.size(); }

    /// Copy with every valence negated (boosters and negators unchanged).
    Lexicon negated() const;

private:
    void check_free(const std::string& token) const;

    std::unordered_map<std::string, double> valences_;
    std::unordered_map<std::string, double> boosters_;
    std::unordered_set<std::string> negators_;
};

struct Token {
    std::string text;      ///< lower-cased, edge punctuation stripped
    bool all_caps = false; ///< source word had letters and all of them upper-case
    int exclamations = 0;  ///< '!' characters in the trailing punctuation
};

/// Whitespace tokenization with per-token emphasis flags.
std::vector<Token> tokenize(std::string_view text);

enum class SentimentLabel { negative, neutral, positive };

struct Thresholds {
    double negative = -0.05;  ///< compound <= negative  -> negative
    double positive = 0.05;   ///< compound >= positive  -> positive
};

struct SentimentScore {
    double compound = 0.0;
    SentimentLabel label = SentimentLabel::neutral;
    int ternary = 0;
};

/// Scorer constants.
inline constexpr double kNormalizationAlpha = 15.0;
inline constexpr double kBoosterIncrement = 0.293;
inline constexpr double kNegationScalar = -0.74;
inline constexpr double kCapsIncrement = 0.733;
inline constexpr double kExclamationIncrement = 0.292;
inline constexpr int kMaxExclamations = 3;
inline constexpr int kModifierWindow = 3;

/// Sum of modified token valences before normalization.
double raw_valence_sum(const std::vector<Token>& tokens, const Lexicon& lexicon);

/// Maps a raw sum into [-1, 1] as s / sqrt(s^2 + alpha).
double normalize_compound(double raw_sum);

SentimentScore classify(double compound, const Thresholds& thresholds = {});

SentimentScore score_compound(std::string_view text, const Lexicon& lexicon, const Thresholds& thresholds = {});

std::vector<std::pair<std::string, SentimentScore>> score_batch(const std::vector<TweetRecord>& records,
                                                                const Lexicon& lexicon,
                                                                const Thresholds& thresholds = {});

/// Rules implemented by the scorer, recorded in run manifests.
std::string_view scorer_rule_summary();

}  // namespace moonvol
