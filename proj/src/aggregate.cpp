#include "sentvol/aggregate.hpp"

#include <algorithm>

namespace sentvol {

namespace {

double sorted_mean(std::vector<double>& values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (const double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace

double laplace_sentd(long n_pos, long n_neg, long n_neut) {
    return static_cast<double>(n_pos - n_neg) /
           static_cast<double>(n_pos + n_neut + n_neg + 3);
}

DailySentiment aggregate_day(const DayBucket& bucket,
                             std::span<const SentimentScores> scores,
                             const RuleConfig& cfg) {
    DailySentiment day;
    day.trading_day = bucket.trading_day;
    day.n_docs = static_cast<long>(bucket.doc_indices.size());

    std::vector<double> neg;
    std::vector<double> neu;
    std::vector<double> pos;
    std::vector<double> compound;
    neg.reserve(bucket.doc_indices.size());
    neu.reserve(bucket.doc_indices.size());
    pos.reserve(bucket.doc_indices.size());
    compound.reserve(bucket.doc_indices.size());

    for (const std::uint32_t idx : bucket.doc_indices) {
        const SentimentScores& s = scores[idx];
        neg.push_back(s.neg);
        neu.push_back(s.neu);
        pos.push_back(s.pos);
        compound.push_back(s.compound);
        switch (classify_polarity(s, cfg)) {
            case Polarity::positive: ++day.n_pos; break;
            case Polarity::negative: ++day.n_neg; break;
            case Polarity::neutral: ++day.n_neut; break;
        }
    }
    day.mean_neg = sorted_mean(neg);
    day.mean_neu = sorted_mean(neu);
    day.mean_pos = sorted_mean(pos);
    day.mean_compound = sorted_mean(compound);
    day.sentd = laplace_sentd(day.n_pos, day.n_neg, day.n_neut);
    return day;
}

std::vector<DailySentiment> build_daily_series(
    std::span<const DayBucket> buckets,
    std::span<const SentimentScores> scores, const RuleConfig& cfg,
    Exec exec) {
    std::vector<DailySentiment> series(buckets.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(buckets.size());
             ++i) {
            series[static_cast<std::size_t>(i)] =
                aggregate_day(buckets[static_cast<std::size_t>(i)], scores, cfg);
        }
    } else {
        for (std::size_t i = 0; i < buckets.size(); ++i) {
            series[i] = aggregate_day(buckets[i], scores, cfg);
        }
    }
    return series;
}

std::vector<DailySentiment> build_daily_series(std::span<const DayBucket> buckets,
                                               std::span<const Document> docs,
                                               const Lexicon& lex,
                                               const RuleConfig& cfg,
                                               Exec exec) {
    const std::vector<SentimentScores> scores =
        score_documents(docs, lex, cfg, exec);
    return build_daily_series(buckets, scores, cfg, exec);
}

}  // namespace sentvol
