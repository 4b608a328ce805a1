#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sentvol/corpus.hpp"

namespace sentvol {

// Proportions sum to 1 (empty input uses the neutral convention 0/1/0).
struct SentimentScores {
    double neg = 0.0;
    double neu = 1.0;
    double pos = 0.0;
    double compound = 0.0;
};

enum class Polarity { negative, neutral, positive };

// Rule constants. The punctuation increments are the published 0.292/0.18
// values; the rest follow the standard VADER rule set. Question marks only
// amplify when at least two are present, and more than question_cap of them
// contribute the flat question_max, matching the reference engine.
struct RuleConfig {
    double exclaim_increment = 0.292;
    double question_increment = 0.18;
    int exclaim_cap = 4;
    int question_cap = 3;
    double question_max = 0.96;
    int negation_window = 3;  // lookback in tokens; effective maximum is 3
    double negation_scalar = -0.74;
    double caps_increment = 0.733;
    double normalization_alpha = 15.0;
    double pos_threshold = 0.05;
    double neg_threshold = -0.05;
    // "but"-clause reweighting plus multiword idiom handling; on by default so
    // scores line up with the reference engine, off for ablation runs.
    bool extended_clause_rules = true;
};

// Enforces the config invariants (non-negative increments, ordered polarity
// thresholds around zero, positive normalization alpha). Called by the
// scoring entry points; throws std::invalid_argument.
void validate(const RuleConfig& cfg);

struct TransparentStringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view sv) const {
        return std::hash<std::string_view>{}(sv);
    }
};
using TokenValueMap = std::unordered_map<std::string, double,
                                         TransparentStringHash, std::equal_to<>>;
using TokenSet =
    std::unordered_set<std::string, TransparentStringHash, std::equal_to<>>;

// Token valences plus the booster/negation/idiom rule tables. Tables default
// to the standard rule sets; the valence map comes from a lexicon file.
class Lexicon {
  public:
    Lexicon();

    // Tab-separated "token<TAB>valence" lines; further columns are ignored
    // (compatible with the reference lexicon file layout). Valences outside
    // [-4, 4] are rejected.
    static Lexicon load(const std::string& path);

    void add(std::string token, double valence);
    bool contains(std::string_view lower_token) const;
    double valence(std::string_view lower_token) const;  // 0 when absent
    std::size_t size() const { return valences_.size(); }

    // Flips the sign of every valence (used by symmetry property tests).
    Lexicon sign_flipped() const;

    const TokenValueMap& boosters() const { return boosters_; }
    const TokenSet& negations() const { return negations_; }
    const TokenValueMap& idioms() const { return idioms_; }

  private:
    TokenValueMap valences_;
    TokenValueMap boosters_;
    TokenSet negations_;
    TokenValueMap idioms_;
};

struct TokenizedText {
    std::vector<std::string> tokens;
    int exclaim_count = 0;
    int question_count = 0;
};

// Whitespace split, then leading/trailing punctuation stripped from each
// token unless the stripped form has two or fewer characters (which keeps
// emoticons like ":)" and short cashtags like "$BP" intact). '!' and '?'
// are counted over the whole text for the punctuation rule.
TokenizedText tokenize(std::string_view text);

SentimentScores score_text(std::string_view text, const Lexicon& lex,
                           const RuleConfig& cfg);
SentimentScores score_document(const Document& doc, const Lexicon& lex,
                               const RuleConfig& cfg);

Polarity classify_polarity(const SentimentScores& s, const RuleConfig& cfg);
std::string_view to_string(Polarity p);

enum class Exec { serial, parallel };

// Scores every document. Each document is independent, so the parallel path
// produces bit-identical output to the serial reference for any thread count.
std::vector<SentimentScores> score_documents(std::span<const Document> docs,
                                             const Lexicon& lex,
                                             const RuleConfig& cfg,
                                             Exec exec = Exec::parallel);

}  // namespace sentvol
