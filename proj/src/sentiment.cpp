#include "moonvol/sentiment.hpp"

#include "moonvol/csv.hpp"
#include "moonvol/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace moonvol {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

bool is_punct(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && u > 0x20 && !(c >= '0' && c <= '9') && !(c >= 'a' && c <= 'z') && !(c >= 'A' && c <= 'Z');
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

enum class Section { valences, boosters, negators };

}  // namespace

void Lexicon::check_free(const std::string& token) const {
    if (token.empty()) throw DataError("empty lexicon token");
    if (valences_.count(token) || boosters_.count(token) || negators_.count(token))
        throw DataError("lexicon token '" + token + "' appears in more than one table");
}

void Lexicon::add_valence(std::string token, double valence) {
    token = lower(token);
    check_free(token);
    valences_.emplace(std::move(token), valence);
}

void Lexicon::add_booster(std::string token, double increment) {
    token = lower(token);
    check_free(token);
    boosters_.emplace(std::move(token), increment);
}

void Lexicon::add_negator(std::string token) {
    token = lower(token);
    check_free(token);
    negators_.insert(std::move(token));
}

const double* Lexicon::valence(std::string_view token) const {
    auto it = valences_.find(std::string(token));
    return it == valences_.end() ? nullptr : &it->second;
}

const double* Lexicon::booster(std::string_view token) const {
    auto it = boosters_.find(std::string(token));
    return it == boosters_.end() ? nullptr : &it->second;
}

bool Lexicon::is_negator(std::string_view token) const { return negators_.count(std::string(token)) > 0; }

Lexicon Lexicon::negated() const {
    Lexicon out = *this;
    for (auto& [_, v] : out.valences_) v = -v;
    return out;
}

Lexicon Lexicon::load(std::istream& in) {
    Lexicon lex;
    Section section = Section::valences;
    std::unordered_set<std::string> section_seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            if (line == "[valences]") {
                section = Section::valences;
                continue;
            }
            if (line == "[boosters]") {
                section = Section::boosters;
                continue;
            }
            if (line == "[negators]") {
                section = Section::negators;
                continue;
            }
            if (line.front() == '#') continue;
            if (section == Section::negators) {
                const std::string token = lower(line);
                if (lex.negators_.count(token)) continue;
                lex.add_negator(token);
                continue;
            }
            throw ParseError("expected token<TAB>value", line_no);
        }

        const std::string token = lower(std::string_view(line).substr(0, tab));
        auto rest = std::string_view(line).substr(tab + 1);
        rest = rest.substr(0, rest.find('\t'));
        if (section == Section::negators) throw ParseError("negator lines take a single token", line_no);

        const double value = csv::parse_double(rest, "lexicon value", line_no);
        auto& table = section == Section::valences ? lex.valences_ : lex.boosters_;
        if (table.count(token)) continue;  // case-folded duplicate
        try {
            if (section == Section::valences)
                lex.add_valence(token, value);
            else
                lex.add_booster(token, value);
        } catch (const DataError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return lex;
}

Lexicon Lexicon::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("lexicon not found: " + path);
    return load(in);
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        const std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (start == i) break;
        const std::string_view word = text.substr(start, i - start);

        std::size_t first = 0, last = word.size();
        while (first < last && is_punct(word[first])) ++first;
        while (last > first && is_punct(word[last - 1])) --last;

        Token tok;
        for (std::size_t k = first < last ? last : 0; k < word.size(); ++k)
            if (word[k] == '!') ++tok.exclamations;

        // Pure punctuation (emoticons) keeps its raw spelling.
        const std::string_view core = first < last ? word.substr(first, last - first) : word;
        bool has_letter = false, has_lower = false;
        for (char c : core) {
            if (c >= 'a' && c <= 'z') has_letter = has_lower = true;
            if (c >= 'A' && c <= 'Z') has_letter = true;
        }
        tok.all_caps = first < last && has_letter && !has_lower;
        tok.text = lower(core);
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

double raw_valence_sum(const std::vector<Token>& tokens, const Lexicon& lexicon) {
    double sum = 0.0;
    int exclamations = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        exclamations += tokens[i].exclamations;
        const double* base = lexicon.valence(tokens[i].text);
        if (!base || *base == 0.0) continue;

        const double direction = sign_of(*base);
        double v = *base;
        if (tokens[i].all_caps) v += direction * kCapsIncrement;

        bool negated = false;
        const std::size_t window_start = i >= kModifierWindow ? i - kModifierWindow : 0;
        for (std::size_t k = window_start; k < i; ++k) {
            if (const double* inc = lexicon.booster(tokens[k].text)) v += direction * *inc;
            if (lexicon.is_negator(tokens[k].text)) negated = true;
        }
        if (negated) v *= kNegationScalar;
        sum += v;
    }
    if (sum != 0.0) sum += sign_of(sum) * kExclamationIncrement * std::min(exclamations, kMaxExclamations);
    return sum;
}

double normalize_compound(double raw_sum) {
    const double c = raw_sum / std::sqrt(raw_sum * raw_sum + kNormalizationAlpha);
    return std::clamp(c, -1.0, 1.0);
}

SentimentScore classify(double compound, const Thresholds& thresholds) {
    SentimentScore s;
    s.compound = compound;
    if (compound >= thresholds.positive) {
        s.label = SentimentLabel::positive;
        s.ternary = 1;
    } else if (compound <= thresholds.negative) {
        s.label = SentimentLabel::negative;
        s.ternary = -1;
    }
    return s;
}

SentimentScore score_compound(std::string_view text, const Lexicon& lexicon, const Thresholds& thresholds) {
    return classify(normalize_compound(raw_valence_sum(tokenize(text), lexicon)), thresholds);
}

std::vector<std::pair<std::string, SentimentScore>> score_batch(const std::vector<TweetRecord>& records,
                                                                const Lexicon& lexicon,
                                                                const Thresholds& thresholds) {
    std::vector<std::pair<std::string, SentimentScore>> out;
    out.reserve(records.size());
    for (const auto& r : records) out.emplace_back(r.id, score_compound(r.text, lexicon, thresholds));
    return out;
}

std::string_view scorer_rule_summary() {
    return "lexicon valence; boosters and negation (x-0.74) over 3 preceding tokens; "
           "all-caps +0.733; exclamations +0.292 each up to 3; compound = s/sqrt(s^2+15)";
}

}  // namespace moonvol
