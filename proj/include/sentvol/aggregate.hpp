#pragma once

#include <span>
#include <vector>

#include "sentvol/corpus.hpp"
#include "sentvol/sentiment.hpp"

namespace sentvol {

// Per-trading-day aggregate. sentd is the Laplace-corrected daily score
// (n_pos - n_neg) / (n_pos + n_neut + n_neg + 3), computed as a single
// integer-ratio division so it is exact for the given counts.
struct DailySentiment {
    Date trading_day;
    double mean_neg = 0.0;
    double mean_neu = 0.0;
    double mean_pos = 0.0;
    double mean_compound = 0.0;
    long n_pos = 0;
    long n_neg = 0;
    long n_neut = 0;
    double sentd = 0.0;
    long n_docs = 0;
};

double laplace_sentd(long n_pos, long n_neg, long n_neut);

// Aggregates one bucket from precomputed per-document scores. Means are
// accumulated over value-sorted addends, so the result is independent of
// document order within the bucket. An empty bucket yields zero means and
// sentd = 0.
DailySentiment aggregate_day(const DayBucket& bucket,
                             std::span<const SentimentScores> scores,
                             const RuleConfig& cfg);

// One record per bucket, in bucket (calendar) order.
std::vector<DailySentiment> build_daily_series(
    std::span<const DayBucket> buckets,
    std::span<const SentimentScores> scores, const RuleConfig& cfg,
    Exec exec = Exec::parallel);

// Convenience overload that scores the documents first.
std::vector<DailySentiment> build_daily_series(
    std::span<const DayBucket> buckets, std::span<const Document> docs,
    const Lexicon& lex, const RuleConfig& cfg, Exec exec = Exec::parallel);

}  // namespace sentvol
