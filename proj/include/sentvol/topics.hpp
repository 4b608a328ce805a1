#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sentvol/corpus.hpp"
#include "sentvol/sentiment.hpp"

namespace sentvol {

// Lowercased maximal alphabetic runs ("FTSE100 up 2%" -> ["ftse", "up"]).
std::vector<std::string> lda_tokenize(std::string_view text);

std::unordered_set<std::string> load_stopwords(const std::string& path);

class Vocabulary {
  public:
    // Tokens that survive stopword removal and the document-frequency
    // filters, with dense ids assigned in lexicographic order.
    static Vocabulary build(std::span<const Document> docs,
                            const std::unordered_set<std::string>& stopwords,
                            int min_df, double max_df_fraction);

    // Reconstructs a vocabulary from serialized tokens/frequencies.
    static Vocabulary from_tokens(std::vector<std::string> tokens,
                                  std::vector<int> doc_freq);

    int id_of(std::string_view token) const;  // -1 when absent
    const std::string& token(int id) const { return tokens_[static_cast<std::size_t>(id)]; }
    int doc_freq(int id) const { return doc_freq_[static_cast<std::size_t>(id)]; }
    int size() const { return static_cast<int>(tokens_.size()); }

    std::vector<int> token_ids(std::string_view text) const;  // OOV dropped

    const std::vector<std::string>& tokens() const { return tokens_; }

  private:
    std::vector<std::string> tokens_;
    std::vector<int> doc_freq_;
    std::unordered_map<std::string, int, TransparentStringHash, std::equal_to<>>
        ids_;
};

// Collapsed-Gibbs LDA state. phi is derived from the frozen counts:
// phi[k][w] = (n_kw + beta) / (n_k + V*beta).
struct LdaModel {
    int topic_count = 0;
    double alpha = 0.0;  // symmetric document-topic prior
    double beta = 0.0;   // symmetric topic-word prior
    Vocabulary vocab;
    std::vector<long> topic_word_counts;  // K * V, row-major by topic
    std::vector<long> topic_totals;       // K
    std::uint64_t seed = 0;
    int iterations = 0;
    long skipped_empty_docs = 0;

    double phi(int topic, int word) const {
        const auto k = static_cast<std::size_t>(topic);
        const auto w = static_cast<std::size_t>(word);
        const auto v = static_cast<std::size_t>(vocab.size());
        return (static_cast<double>(topic_word_counts[k * v + w]) + beta) /
               (static_cast<double>(topic_totals[k]) +
                static_cast<double>(vocab.size()) * beta);
    }
};

struct TrainOptions {
    int iterations = 1000;
    std::uint64_t seed = 0;
    // Verify count conservation after every sweep (throws on violation).
    bool check_invariants = false;
    // When > 0, invoke on_checkpoint(sweep, model_snapshot) every N sweeps.
    int checkpoint_every = 0;
    std::function<void(int, const LdaModel&)> on_checkpoint;
};

// Trains by collapsed Gibbs sampling. Documents are visited in id order with
// per-document RNG substreams derived from (seed, id), so the result does not
// depend on the order documents are supplied in. alpha <= 0 selects the
// 50/K default. Documents with no in-vocabulary tokens are skipped (counted
// in the model); an entirely empty corpus is an error.
LdaModel gibbs_train(std::span<const Document> docs, const Vocabulary& vocab,
                     int topic_count, double alpha, double beta,
                     const TrainOptions& options);

struct InferParams {
    int burn_in = 50;
    int samples = 20;
};

// Fold-in inference with the model's topic-word counts held fixed. Returns
// the averaged posterior theta; empty or all-OOV input yields uniform 1/K.
std::vector<double> infer_theta(const LdaModel& model,
                                std::span<const int> token_ids,
                                const InferParams& params, std::uint64_t seed);
std::vector<double> infer_theta(const LdaModel& model, const Document& doc,
                                const InferParams& params, std::uint64_t seed);

// Batch fold-in; per-document substreams keyed by document id make the
// parallel path bit-identical to the serial reference.
std::vector<std::vector<double>> infer_thetas(const LdaModel& model,
                                              std::span<const Document> docs,
                                              const InferParams& params,
                                              std::uint64_t seed,
                                              Exec exec = Exec::parallel);

// m highest-phi tokens for a topic, ties broken lexicographically.
std::vector<std::pair<std::string, double>> top_words(const LdaModel& model,
                                                      int topic, int m);

enum class FeatureMode { distribution, count };

std::string_view to_string(FeatureMode m);

struct DayFeatureVector {
    Date trading_day;
    std::vector<double> features;
};

// distribution: mean theta over the day's documents (uniform when empty);
// count: per document, increment the argmax-topic cell (zeros when empty).
// Documents are folded in over id-derived substreams, so the result is
// independent of document order.
DayFeatureVector day_feature_vector(const LdaModel& model,
                                    const DayBucket& bucket,
                                    std::span<const Document> docs,
                                    FeatureMode mode, const InferParams& params,
                                    std::uint64_t seed);

// Held-out perplexity under fold-in thetas; lower is better.
double perplexity(const LdaModel& model, std::span<const Document> docs,
                  const InferParams& params, std::uint64_t seed);

// Versioned text container; round-trips bit-exactly.
void save_model(const LdaModel& model, const std::string& path);
LdaModel load_model(const std::string& path);

}  // namespace sentvol
