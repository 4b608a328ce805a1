#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "sentvol/io_util.hpp"
#include "sentvol/rng.hpp"
#include "sentvol/sentiment.hpp"
#include "sentvol/sha256.hpp"

using namespace sentvol;

namespace {

const Lexicon& shipped_lexicon() {
    static const Lexicon lex = Lexicon::load(repo_data_path("vader_lexicon.txt"));
    return lex;
}

struct GoldenRow {
    std::string text;
    double neg, neu, pos, compound;
};

std::vector<GoldenRow> load_golden(std::string* lexicon_sha) {
    std::ifstream in(test_data_path("sentiment_golden.tsv"));
    REQUIRE(in.good());
    std::vector<GoldenRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# lexicon_sha256=", 0) == 0) {
            if (lexicon_sha) *lexicon_sha = line.substr(17);
            continue;
        }
        if (line.rfind("text\t", 0) == 0) continue;
        const auto cols = split(line, '\t');
        REQUIRE(cols.size() == 5);
        rows.push_back(GoldenRow{cols[0], std::stod(cols[1]), std::stod(cols[2]),
                                 std::stod(cols[3]), std::stod(cols[4])});
    }
    return rows;
}

}  // namespace

TEST_CASE("tokenize splits, strips punctuation and keeps short leftovers") {
    const TokenizedText t1 = tokenize("Markets rally!");
    CHECK(t1.tokens == std::vector<std::string>{"Markets", "rally"});
    CHECK(t1.exclaim_count == 1);
    CHECK(t1.question_count == 0);

    const TokenizedText t2 = tokenize("");
    CHECK(t2.tokens.empty());
    CHECK(t2.exclaim_count == 0);

    // emoticons and short cashtags survive stripping
    const TokenizedText t3 = tokenize("$BP up :)");
    CHECK(t3.tokens == std::vector<std::string>{"$BP", "up", ":)"});

    const TokenizedText t4 = tokenize("  spaced\tout?? tokens. ");
    CHECK(t4.tokens == std::vector<std::string>{"spaced", "out", "tokens"});
    CHECK(t4.question_count == 2);

    // two-character residue keeps the original token (so "ok!" stays "ok!")
    const TokenizedText t5 = tokenize("ok! then");
    CHECK(t5.tokens == std::vector<std::string>{"ok!", "then"});
}

TEST_CASE("golden sentiment fixture matches the reference engine") {
    std::string expected_sha;
    const auto rows = load_golden(&expected_sha);
    REQUIRE(rows.size() == 50);
    // the fixture is only valid for the lexicon it was generated from
    CHECK(sha256_file(repo_data_path("vader_lexicon.txt")) == expected_sha);

    const Lexicon& lex = shipped_lexicon();
    const RuleConfig cfg;
    for (const auto& row : rows) {
        CAPTURE(row.text);
        const SentimentScores s = score_text(row.text, lex, cfg);
        CHECK(std::fabs(s.neg - row.neg) < 1e-9);
        CHECK(std::fabs(s.neu - row.neu) < 1e-9);
        CHECK(std::fabs(s.pos - row.pos) < 1e-9);
        CHECK(std::fabs(s.compound - row.compound) < 1e-9);
    }
}

TEST_CASE("single-token compound values follow the normalization curve") {
    const Lexicon& lex = shipped_lexicon();
    const RuleConfig cfg;
    // lexicon valence 1.9 -> 1.9/sqrt(1.9^2+15)
    CHECK(score_text("good", lex, cfg).compound ==
          doctest::Approx(0.4404).epsilon(1e-4));
    // one "!" adds 0.292 to the raw sum
    CHECK(score_text("good!", lex, cfg).compound ==
          doctest::Approx(0.4926).epsilon(1e-4));
}

TEST_CASE("no lexicon tokens yields the neutral convention") {
    const Lexicon& lex = shipped_lexicon();
    const RuleConfig cfg;
    for (const char* text : {"the quarterly window opened", ""}) {
        const SentimentScores s = score_text(text, lex, cfg);
        CHECK(s.neg == 0.0);
        CHECK(s.neu == 1.0);
        CHECK(s.pos == 0.0);
        CHECK(s.compound == 0.0);
    }
}

TEST_CASE("polarity thresholds") {
    const RuleConfig cfg;
    CHECK(classify_polarity({0, 0, 1, 0.44}, cfg) == Polarity::positive);
    CHECK(classify_polarity({0, 1, 0, 0.0}, cfg) == Polarity::neutral);
    CHECK(classify_polarity({1, 0, 0, -0.05}, cfg) == Polarity::negative);
    CHECK(classify_polarity({0, 0, 1, 0.05}, cfg) == Polarity::positive);
    CHECK(classify_polarity({0, 1, 0, 0.0499}, cfg) == Polarity::neutral);
}

namespace {

// random idiom-free documents over the shipped lexicon plus filler tokens
std::string random_document(Rng& rng, const std::vector<std::string>& words) {
    static const std::vector<std::string> filler{
        "the", "a",  "market", "index", "session", "traders", "again",
        "not", "very", "hardly", "slightly", "REALLY", "so", "never"};
    std::ostringstream text;
    const std::size_t n = 1 + rng.next_below(12);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) text << ' ';
        if (rng.next_double() < 0.55) {
            text << words[rng.next_below(words.size())];
        } else {
            text << filler[rng.next_below(filler.size())];
        }
    }
    const std::size_t bangs = rng.next_below(6);
    for (std::size_t i = 0; i < bangs; ++i) text << '!';
    if (rng.next_double() < 0.3) text << "??";
    return text.str();
}

std::vector<std::string> lexicon_words() {
    return {"good", "great", "bad",  "horrible", "rally", "crash",
            "gain", "loss",  "calm", "panic",    "worst", "best"};
}

}  // namespace

TEST_CASE("proportion closure and compound bounds hold for random text") {
    const Lexicon& lex = shipped_lexicon();
    const RuleConfig cfg;
    const auto words = lexicon_words();
    Rng rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const std::string text = random_document(rng, words);
        CAPTURE(text);
        const SentimentScores s = score_text(text, lex, cfg);
        CHECK(std::fabs(s.neg + s.neu + s.pos - 1.0) < 1e-6);
        CHECK(std::fabs(s.compound) < 1.0);
    }
}

TEST_CASE("compound is odd under lexicon sign flip") {
    const Lexicon& lex = shipped_lexicon();
    const Lexicon flipped = lex.sign_flipped();
    RuleConfig cfg;
    cfg.extended_clause_rules = false;  // idiom constants do not flip
    const auto words = lexicon_words();
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const std::string text = random_document(rng, words);
        CAPTURE(text);
        const SentimentScores s = score_text(text, lex, cfg);
        const SentimentScores f = score_text(text, flipped, cfg);
        CHECK(f.compound == -s.compound);
        CHECK(f.neg == s.pos);
        CHECK(f.pos == s.neg);
        CHECK(f.neu == s.neu);
    }
}

TEST_CASE("punctuation monotonicity below and at the cap") {
    const Lexicon& lex = shipped_lexicon();
    const RuleConfig cfg;
    std::string text = "rally today";
    double prev = score_text(text, lex, cfg).compound;
    CHECK(prev > 0);
    for (int bangs = 1; bangs <= 6; ++bangs) {
        text += "!";
        const double now = score_text(text, lex, cfg).compound;
        if (bangs <= cfg.exclaim_cap) {
            CHECK(now > prev);
        } else {
            CHECK(now == prev);
        }
        prev = now;
    }
}

TEST_CASE("scoring is deterministic") {
    const Lexicon& lex = shipped_lexicon();
    const RuleConfig cfg;
    const std::string text = "GAINS soared but fears of losses grow!!";
    const SentimentScores a = score_text(text, lex, cfg);
    const SentimentScores b = score_text(text, lex, cfg);
    CHECK(a.compound == b.compound);
    CHECK(a.neg == b.neg);
    CHECK(a.neu == b.neu);
    CHECK(a.pos == b.pos);
}

TEST_CASE("extended clause rules flag controls but-reweighting") {
    const Lexicon& lex = shipped_lexicon();
    RuleConfig with;
    RuleConfig without;
    without.extended_clause_rules = false;
    const std::string text = "profits were good but the outlook is gloomy";
    const double c_with = score_text(text, lex, with).compound;
    const double c_without = score_text(text, lex, without).compound;
    // halving the positive clause and amplifying the negative one moves the
    // compound down
    CHECK(c_with < c_without);
}

TEST_CASE("all-caps documents do not trigger the caps rule") {
    const Lexicon& lex = shipped_lexicon();
    const RuleConfig cfg;
    const double mixed = score_text("GOOD day", lex, cfg).compound;
    const double all_caps = score_text("GOOD DAY", lex, cfg).compound;
    const double plain = score_text("good day", lex, cfg).compound;
    CHECK(mixed > plain);        // caps emphasis applied
    CHECK(all_caps == plain);    // differential off
}

TEST_CASE("rule config invariants are enforced") {
    const Lexicon& lex = shipped_lexicon();
    RuleConfig bad;
    bad.pos_threshold = -0.1;  // must be > 0
    CHECK_THROWS_AS(score_text("good", lex, bad), std::invalid_argument);
    RuleConfig negative_increment;
    negative_increment.exclaim_increment = -1.0;
    CHECK_THROWS_AS(score_text("good", lex, negative_increment),
                    std::invalid_argument);
    RuleConfig zero_alpha;
    zero_alpha.normalization_alpha = 0.0;
    CHECK_THROWS_AS(score_text("good", lex, zero_alpha),
                    std::invalid_argument);
}

TEST_CASE("lexicon loading validates and ignores extra columns") {
    TempDir tmp("lexicon");
    write_text_file(tmp.file("lex.txt"),
                    "good\t1.9\t0.9\t[2, 2, 2]\nbad\t-2.5\n");
    const Lexicon lex = Lexicon::load(tmp.file("lex.txt"));
    CHECK(lex.size() == 2);
    CHECK(lex.valence("good") == doctest::Approx(1.9));

    write_text_file(tmp.file("range.txt"), "huge\t5.5\n");
    CHECK_THROWS_AS(Lexicon::load(tmp.file("range.txt")), std::invalid_argument);
    write_text_file(tmp.file("empty.txt"), "\n\n");
    CHECK_THROWS_AS(Lexicon::load(tmp.file("empty.txt")), std::runtime_error);
    CHECK_THROWS_AS(Lexicon::load(tmp.file("missing.txt")), std::runtime_error);
}
