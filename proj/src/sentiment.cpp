#include "sentvol/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sentvol/io_util.hpp"

namespace sentvol {

namespace {

constexpr double kBoosterIncr = 0.293;
constexpr double kBoosterDecr = -0.293;
constexpr double kDampTwoBack = 0.95;
constexpr double kDampThreeBack = 0.9;
constexpr double kNeverScalar = 1.25;
constexpr double kButBefore = 0.5;
constexpr double kButAfter = 1.5;

const char* const kNegations[] = {
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt",
    "ain't", "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't",
    "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt", "neither",
    "don't", "hadn't", "hasn't", "haven't", "isn't", "mightn't", "mustn't",
    "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing",
    "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
    "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't", "without",
    "wont", "wouldnt", "won't", "wouldn't", "rarely", "seldom", "despite"};

const char* const kIncreasers[] = {
    "absolutely", "amazingly", "awfully", "completely", "considerable",
    "considerably", "decidedly", "deeply", "effing", "enormous", "enormously",
    "entirely", "especially", "exceptional", "exceptionally", "extreme",
    "extremely", "fabulously", "flipping", "flippin", "frackin", "fracking",
    "fricking", "frickin", "frigging", "friggin", "fully", "fuckin", "fucking",
    "fuggin", "fugging", "greatly", "hella", "highly", "hugely", "incredible",
    "incredibly", "intensely", "major", "majorly", "more", "most",
    "particularly", "purely", "quite", "really", "remarkably", "so",
    "substantially", "thoroughly", "total", "totally", "tremendous",
    "tremendously", "uber", "unbelievably", "unusually", "utter", "utterly",
    "very"};

const char* const kDecreasers[] = {
    "almost", "barely", "hardly", "just enough", "kind of", "kinda", "kindof",
    "kind-of", "less", "little", "marginal", "marginally", "occasional",
    "occasionally", "partly", "scarce", "scarcely", "slight", "slightly",
    "somewhat", "sort of", "sorta", "sortof", "sort-of"};

const std::pair<const char*, double> kIdioms[] = {
    {"the shit", 3.0},       {"the bomb", 3.0},    {"bad ass", 1.5},
    {"badass", 1.5},         {"bus stop", 0.0},    {"yeah right", -2.0},
    {"kiss of death", -1.5}, {"to die for", 3.0},  {"beating heart", 3.1},
    {"broken heart", -2.9}};

bool is_ascii_punct(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (u >= '!' && u <= '/') || (u >= ':' && u <= '@') ||
           (u >= '[' && u <= '`') || (u >= '{' && u <= '~');
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

// True when the token has at least one letter and no lowercase letters.
bool is_all_caps(std::string_view token) {
    bool any_cased = false;
    for (const char c : token) {
        if (c >= 'a' && c <= 'z') return false;
        if (c >= 'A' && c <= 'Z') any_cased = true;
    }
    return any_cased;
}

bool allcap_differential(const std::vector<std::string>& tokens) {
    std::size_t allcap = 0;
    for (const auto& t : tokens) {
        if (is_all_caps(t)) ++allcap;
    }
    const std::size_t differential = tokens.size() - allcap;
    return differential > 0 && differential < tokens.size();
}

bool is_negation(const Lexicon& lex, const std::string& lower) {
    if (lex.negations().contains(lower)) return true;
    return lower.find("n't") != std::string::npos;
}

double booster_scalar(const Lexicon& lex, const std::string& token,
                      const std::string& lower, double valence,
                      bool is_cap_diff, const RuleConfig& cfg) {
    const auto it = lex.boosters().find(lower);
    if (it == lex.boosters().end()) return 0.0;
    double scalar = it->second;
    if (valence < 0) scalar = -scalar;
    if (is_all_caps(token) && is_cap_diff) {
        if (valence > 0) {
            scalar += cfg.caps_increment;
        } else {
            scalar -= cfg.caps_increment;
        }
    }
    return scalar;
}

double normalize_score(double score, double alpha) {
    const double norm = score / std::sqrt(score * score + alpha);
    return std::clamp(norm, -1.0, 1.0);
}

struct ScoreContext {
    const Lexicon& lex;
    const RuleConfig& cfg;
    const std::vector<std::string>& tokens;
    const std::vector<std::string>& lower;
    bool is_cap_diff;
};

double negation_check(const ScoreContext& ctx, double valence, int back,
                      std::size_t i) {
    const auto& lower = ctx.lower;
    const double n_scalar = ctx.cfg.negation_scalar;
    if (back == 0) {
        if (is_negation(ctx.lex, lower[i - 1])) valence *= n_scalar;
    } else if (back == 1) {
        if (lower[i - 2] == "never" &&
            (lower[i - 1] == "so" || lower[i - 1] == "this")) {
            valence *= kNeverScalar;
        } else if (lower[i - 2] == "without" && lower[i - 1] == "doubt") {
            // explicit non-negation
        } else if (is_negation(ctx.lex, lower[i - 2])) {
            valence *= n_scalar;
        }
    } else if (back == 2) {
        if ((lower[i - 3] == "never" &&
             (lower[i - 2] == "so" || lower[i - 2] == "this")) ||
            (lower[i - 1] == "so" || lower[i - 1] == "this")) {
            valence *= kNeverScalar;
        } else if (lower[i - 3] == "without" &&
                   (lower[i - 2] == "doubt" || lower[i - 1] == "doubt")) {
            // explicit non-negation
        } else if (is_negation(ctx.lex, lower[i - 3])) {
            valence *= n_scalar;
        }
    }
    return valence;
}

double special_idioms_check(const ScoreContext& ctx, double valence,
                            std::size_t i) {
    const auto& lower = ctx.lower;
    const auto join2 = [&](std::size_t a, std::size_t b) {
        return lower[a] + " " + lower[b];
    };
    const auto join3 = [&](std::size_t a, std::size_t b, std::size_t c) {
        return lower[a] + " " + lower[b] + " " + lower[c];
    };

    const std::string onezero = join2(i - 1, i);
    const std::string twoonezero = join3(i - 2, i - 1, i);
    const std::string twoone = join2(i - 2, i - 1);
    const std::string threetwoone = join3(i - 3, i - 2, i - 1);
    const std::string threetwo = join2(i - 3, i - 2);

    for (const auto& seq :
         {onezero, twoonezero, twoone, threetwoone, threetwo}) {
        const auto it = ctx.lex.idioms().find(seq);
        if (it != ctx.lex.idioms().end()) {
            valence = it->second;
            break;
        }
    }
    if (lower.size() > i + 1) {
        const auto it = ctx.lex.idioms().find(join2(i, i + 1));
        if (it != ctx.lex.idioms().end()) valence = it->second;
    }
    if (lower.size() > i + 2) {
        const auto it = ctx.lex.idioms().find(join3(i, i + 1, i + 2));
        if (it != ctx.lex.idioms().end()) valence = it->second;
    }
    // booster bigrams acting at a distance, e.g. "sort of"
    for (const auto& n_gram : {threetwoone, threetwo, twoone}) {
        const auto it = ctx.lex.boosters().find(n_gram);
        if (it != ctx.lex.boosters().end()) valence += it->second;
    }
    return valence;
}

double least_check(const ScoreContext& ctx, double valence, std::size_t i) {
    const auto& lower = ctx.lower;
    if (i > 1 && !ctx.lex.contains(lower[i - 1]) && lower[i - 1] == "least") {
        if (lower[i - 2] != "at" && lower[i - 2] != "very") {
            valence *= ctx.cfg.negation_scalar;
        }
    } else if (i > 0 && !ctx.lex.contains(lower[i - 1]) &&
               lower[i - 1] == "least") {
        valence *= ctx.cfg.negation_scalar;
    }
    return valence;
}

double token_valence(const ScoreContext& ctx, std::size_t i) {
    const auto& tokens = ctx.tokens;
    const auto& lower = ctx.lower;
    if (!ctx.lex.contains(lower[i])) return 0.0;

    double valence = ctx.lex.valence(lower[i]);

    // "no" before another lexicon token acts as a negator, not as a token.
    if (lower[i] == "no" && i + 1 < tokens.size() &&
        ctx.lex.contains(lower[i + 1])) {
        valence = 0.0;
    }
    if ((i > 0 && lower[i - 1] == "no") || (i > 1 && lower[i - 2] == "no") ||
        (i > 2 && lower[i - 3] == "no" &&
         (lower[i - 1] == "or" || lower[i - 1] == "nor"))) {
        valence = ctx.lex.valence(lower[i]) * ctx.cfg.negation_scalar;
    }

    if (is_all_caps(tokens[i]) && ctx.is_cap_diff) {
        valence += valence > 0 ? ctx.cfg.caps_increment : -ctx.cfg.caps_increment;
    }

    const int window = std::clamp(ctx.cfg.negation_window, 0, 3);
    for (int back = 0; back < window; ++back) {
        const auto ub = static_cast<std::size_t>(back);
        if (i <= ub || ctx.lex.contains(lower[i - ub - 1])) continue;
        double s = booster_scalar(ctx.lex, tokens[i - ub - 1], lower[i - ub - 1],
                                  valence, ctx.is_cap_diff, ctx.cfg);
        if (back == 1 && s != 0.0) s *= kDampTwoBack;
        if (back == 2 && s != 0.0) s *= kDampThreeBack;
        valence += s;
        valence = negation_check(ctx, valence, back, i);
        if (back == 2 && ctx.cfg.extended_clause_rules) {
            valence = special_idioms_check(ctx, valence, i);
        }
    }
    return least_check(ctx, valence, i);
}

void but_clause_reweight(const std::vector<std::string>& lower,
                         std::vector<double>& sentiments) {
    const auto it = std::find(lower.begin(), lower.end(), "but");
    if (it == lower.end()) return;
    const auto but_index = static_cast<std::size_t>(it - lower.begin());
    for (std::size_t i = 0; i < sentiments.size(); ++i) {
        if (i < but_index) {
            sentiments[i] *= kButBefore;
        } else if (i > but_index) {
            sentiments[i] *= kButAfter;
        }
    }
}

double punctuation_emphasis(const TokenizedText& text, const RuleConfig& cfg) {
    const int ep = std::min(text.exclaim_count, cfg.exclaim_cap);
    double amp = ep * cfg.exclaim_increment;
    const int qm = text.question_count;
    if (qm > 1) {
        amp += qm <= cfg.question_cap ? qm * cfg.question_increment
                                      : cfg.question_max;
    }
    return amp;
}

SentimentScores score_valence(const std::vector<double>& sentiments,
                              const TokenizedText& text,
                              const RuleConfig& cfg) {
    if (sentiments.empty()) return SentimentScores{};  // neutral convention

    double sum = 0.0;
    for (const double s : sentiments) sum += s;

    const double punct = punctuation_emphasis(text, cfg);
    if (sum > 0) {
        sum += punct;
    } else if (sum < 0) {
        sum -= punct;
    }

    SentimentScores out;
    out.compound = normalize_score(sum, cfg.normalization_alpha);

    double pos_sum = 0.0;
    double neg_sum = 0.0;
    std::size_t neu_count = 0;
    for (const double s : sentiments) {
        if (s > 0) pos_sum += s + 1.0;  // +1 so neutral tokens weigh as 1
        if (s < 0) neg_sum += s - 1.0;
        if (s == 0) ++neu_count;
    }
    if (pos_sum > std::fabs(neg_sum)) {
        pos_sum += punct;
    } else if (pos_sum < std::fabs(neg_sum)) {
        neg_sum -= punct;
    }

    const double total =
        pos_sum + std::fabs(neg_sum) + static_cast<double>(neu_count);
    out.pos = std::fabs(pos_sum / total);
    out.neg = std::fabs(neg_sum / total);
    out.neu = std::fabs(static_cast<double>(neu_count) / total);
    return out;
}

}  // namespace

Lexicon::Lexicon() {
    for (const char* w : kNegations) negations_.emplace(w);
    for (const char* w : kIncreasers) boosters_.emplace(w, kBoosterIncr);
    for (const char* w : kDecreasers) boosters_.emplace(w, kBoosterDecr);
    for (const auto& [phrase, value] : kIdioms) idioms_.emplace(phrase, value);
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
    Lexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cols = split(line, '\t');
        if (cols.size() < 2) {
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": expected token<TAB>valence");
        }
        char* end = nullptr;
        const double valence = std::strtod(cols[1].c_str(), &end);
        if (end != cols[1].c_str() + cols[1].size() || cols[1].empty()) {
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": bad valence '" + cols[1] + "'");
        }
        lex.add(cols[0], valence);
    }
    if (lex.valences_.empty()) {
        throw std::runtime_error(path + ": lexicon has no entries");
    }
    return lex;
}

void Lexicon::add(std::string token, double valence) {
    if (!(valence >= -4.0 && valence <= 4.0)) {
        throw std::invalid_argument("lexicon valence out of [-4,4] for '" +
                                    token + "'");
    }
    valences_[std::move(token)] = valence;
}

bool Lexicon::contains(std::string_view lower_token) const {
    return valences_.find(lower_token) != valences_.end();
}

double Lexicon::valence(std::string_view lower_token) const {
    const auto it = valences_.find(lower_token);
    return it == valences_.end() ? 0.0 : it->second;
}

Lexicon Lexicon::sign_flipped() const {
    Lexicon out = *this;
    for (auto& [token, valence] : out.valences_) valence = -valence;
    return out;
}

TokenizedText tokenize(std::string_view text) {
    TokenizedText out;
    for (const char c : text) {
        if (c == '!') ++out.exclaim_count;
        if (c == '?') ++out.question_count;
    }
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() &&
               std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < text.size() &&
               !std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        if (i == start) continue;
        const std::string_view raw = text.substr(start, i - start);
        std::size_t b = 0;
        std::size_t e = raw.size();
        while (b < e && is_ascii_punct(raw[b])) ++b;
        while (e > b && is_ascii_punct(raw[e - 1])) --e;
        // short leftovers were likely emoticons or tickers; keep them whole
        if (e - b <= 2) {
            out.tokens.emplace_back(raw);
        } else {
            out.tokens.emplace_back(raw.substr(b, e - b));
        }
    }
    return out;
}

void validate(const RuleConfig& cfg) {
    if (cfg.exclaim_increment < 0 || cfg.question_increment < 0 ||
        cfg.question_max < 0 || cfg.caps_increment < 0) {
        throw std::invalid_argument("rule increments must be >= 0");
    }
    if (!(cfg.neg_threshold < 0.0 && 0.0 < cfg.pos_threshold)) {
        throw std::invalid_argument(
            "polarity thresholds must satisfy neg < 0 < pos");
    }
    if (!(cfg.normalization_alpha > 0.0)) {
        throw std::invalid_argument("normalization alpha must be > 0");
    }
    if (cfg.exclaim_cap < 0 || cfg.question_cap < 0 ||
        cfg.negation_window < 0) {
        throw std::invalid_argument("rule caps must be >= 0");
    }
}

SentimentScores score_text(std::string_view text, const Lexicon& lex,
                           const RuleConfig& cfg) {
    validate(cfg);
    const TokenizedText tokenized = tokenize(text);
    const auto& tokens = tokenized.tokens;

    std::vector<std::string> lower;
    lower.reserve(tokens.size());
    for (const auto& t : tokens) lower.push_back(to_lower(t));

    const ScoreContext ctx{lex, cfg, tokens, lower,
                           allcap_differential(tokens)};

    std::vector<double> sentiments;
    sentiments.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (lex.boosters().contains(lower[i])) {
            sentiments.push_back(0.0);
            continue;
        }
        if (i + 1 < tokens.size() && lower[i] == "kind" &&
            lower[i + 1] == "of") {
            sentiments.push_back(0.0);
            continue;
        }
        sentiments.push_back(token_valence(ctx, i));
    }
    if (cfg.extended_clause_rules) but_clause_reweight(lower, sentiments);

    return score_valence(sentiments, tokenized, cfg);
}

SentimentScores score_document(const Document& doc, const Lexicon& lex,
                               const RuleConfig& cfg) {
    return score_text(doc.text, lex, cfg);
}

Polarity classify_polarity(const SentimentScores& s, const RuleConfig& cfg) {
    if (s.compound >= cfg.pos_threshold) return Polarity::positive;
    if (s.compound <= cfg.neg_threshold) return Polarity::negative;
    return Polarity::neutral;
}

std::string_view to_string(Polarity p) {
    switch (p) {
        case Polarity::negative: return "negative";
        case Polarity::neutral: return "neutral";
        case Polarity::positive: return "positive";
    }
    return "neutral";
}

std::vector<SentimentScores> score_documents(std::span<const Document> docs,
                                             const Lexicon& lex,
                                             const RuleConfig& cfg, Exec exec) {
    std::vector<SentimentScores> scores(docs.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 256)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(docs.size());
             ++i) {
            scores[static_cast<std::size_t>(i)] =
                score_document(docs[static_cast<std::size_t>(i)], lex, cfg);
        }
    } else {
        for (std::size_t i = 0; i < docs.size(); ++i) {
            scores[i] = score_document(docs[i], lex, cfg);
        }
    }
    return scores;
}

}  // namespace sentvol
