#include "sentvol/topics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sentvol/io_util.hpp"
#include "sentvol/rng.hpp"

namespace sentvol {

std::vector<std::string> lda_tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (const char c : text) {
        if (c >= 'a' && c <= 'z') {
            current.push_back(c);
        } else if (c >= 'A' && c <= 'Z') {
            current.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open stopword file: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const std::string w = trim(line);
        if (!w.empty()) words.insert(w);
    }
    return words;
}

Vocabulary Vocabulary::build(std::span<const Document> docs,
                             const std::unordered_set<std::string>& stopwords,
                             int min_df, double max_df_fraction) {
    if (docs.empty()) throw std::invalid_argument("build_vocab: empty corpus");

    std::unordered_map<std::string, int> df;
    std::unordered_set<std::string> seen_in_doc;
    for (const auto& doc : docs) {
        seen_in_doc.clear();
        for (auto& token : lda_tokenize(doc.text)) {
            if (stopwords.contains(token)) continue;
            if (seen_in_doc.insert(token).second) ++df[token];
        }
    }
    const double max_df =
        max_df_fraction * static_cast<double>(docs.size());

    Vocabulary vocab;
    for (const auto& [token, freq] : df) {
        if (freq < min_df) continue;
        if (static_cast<double>(freq) > max_df) continue;
        vocab.tokens_.push_back(token);
    }
    if (vocab.tokens_.empty()) {
        throw std::runtime_error(
            "build_vocab: vocabulary empty after frequency filtering");
    }
    std::sort(vocab.tokens_.begin(), vocab.tokens_.end());
    vocab.doc_freq_.reserve(vocab.tokens_.size());
    for (std::size_t i = 0; i < vocab.tokens_.size(); ++i) {
        vocab.ids_.emplace(vocab.tokens_[i], static_cast<int>(i));
        vocab.doc_freq_.push_back(df[vocab.tokens_[i]]);
    }
    return vocab;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens,
                                   std::vector<int> doc_freq) {
    if (tokens.size() != doc_freq.size() || tokens.empty()) {
        throw std::invalid_argument("from_tokens: bad vocabulary data");
    }
    Vocabulary vocab;
    vocab.tokens_ = std::move(tokens);
    vocab.doc_freq_ = std::move(doc_freq);
    for (std::size_t i = 0; i < vocab.tokens_.size(); ++i) {
        vocab.ids_.emplace(vocab.tokens_[i], static_cast<int>(i));
    }
    return vocab;
}

int Vocabulary::id_of(std::string_view token) const {
    const auto it = ids_.find(token);
    return it == ids_.end() ? -1 : it->second;
}

std::vector<int> Vocabulary::token_ids(std::string_view text) const {
    std::vector<int> ids;
    for (const auto& token : lda_tokenize(text)) {
        const int id = id_of(token);
        if (id >= 0) ids.push_back(id);
    }
    return ids;
}

namespace {

struct TrainDoc {
    std::size_t source_index = 0;
    std::vector<int> words;
    std::vector<int> topics;
    Rng rng{0};
};

LdaModel snapshot_model(int topic_count, double alpha, double beta,
                        const Vocabulary& vocab,
                        const std::vector<long>& topic_word_counts,
                        const std::vector<long>& topic_totals,
                        std::uint64_t seed, int iterations,
                        long skipped_empty_docs) {
    LdaModel model;
    model.topic_count = topic_count;
    model.alpha = alpha;
    model.beta = beta;
    model.vocab = vocab;
    model.topic_word_counts = topic_word_counts;
    model.topic_totals = topic_totals;
    model.seed = seed;
    model.iterations = iterations;
    model.skipped_empty_docs = skipped_empty_docs;
    return model;
}

}  // namespace

LdaModel gibbs_train(std::span<const Document> docs, const Vocabulary& vocab,
                     int topic_count, double alpha, double beta,
                     const TrainOptions& options) {
    if (topic_count < 1) throw std::invalid_argument("topic_count must be >= 1");
    if (vocab.size() < topic_count) {
        throw std::invalid_argument("vocabulary smaller than topic count");
    }
    if (options.iterations < 1) {
        throw std::invalid_argument("iterations must be >= 1");
    }
    if (alpha <= 0.0) alpha = 50.0 / topic_count;
    if (beta <= 0.0) throw std::invalid_argument("beta must be > 0");

    const auto k_count = static_cast<std::size_t>(topic_count);
    const auto v_count = static_cast<std::size_t>(vocab.size());

    // Canonical visit order: sort by document id so the chain is independent
    // of input order. Per-document RNG substreams come from (seed, id).
    std::vector<std::size_t> order(docs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return docs[a].id < docs[b].id;
    });

    std::vector<TrainDoc> train_docs;
    long skipped = 0;
    for (const std::size_t idx : order) {
        std::vector<int> words = vocab.token_ids(docs[idx].text);
        if (words.empty()) {
            ++skipped;
            continue;
        }
        TrainDoc td;
        td.source_index = idx;
        td.words = std::move(words);
        td.rng = Rng::substream(options.seed, Rng::hash(docs[idx].id));
        train_docs.push_back(std::move(td));
    }
    if (train_docs.empty()) {
        throw std::runtime_error("gibbs_train: no documents with in-vocabulary tokens");
    }

    std::vector<long> topic_word(k_count * v_count, 0);
    std::vector<long> topic_total(k_count, 0);
    std::vector<std::vector<long>> doc_topic(train_docs.size(),
                                             std::vector<long>(k_count, 0));

    for (std::size_t d = 0; d < train_docs.size(); ++d) {
        auto& td = train_docs[d];
        td.topics.resize(td.words.size());
        for (std::size_t n = 0; n < td.words.size(); ++n) {
            const int z = static_cast<int>(td.rng.next_below(k_count));
            td.topics[n] = z;
            ++doc_topic[d][static_cast<std::size_t>(z)];
            ++topic_word[static_cast<std::size_t>(z) * v_count +
                         static_cast<std::size_t>(td.words[n])];
            ++topic_total[static_cast<std::size_t>(z)];
        }
    }

    long total_tokens = 0;
    for (const auto& td : train_docs) {
        total_tokens += static_cast<long>(td.words.size());
    }

    const double v_beta = static_cast<double>(vocab.size()) * beta;
    std::vector<double> weights(k_count);

    for (int sweep = 1; sweep <= options.iterations; ++sweep) {
        for (std::size_t d = 0; d < train_docs.size(); ++d) {
            auto& td = train_docs[d];
            auto& n_dk = doc_topic[d];
            for (std::size_t n = 0; n < td.words.size(); ++n) {
                const auto w = static_cast<std::size_t>(td.words[n]);
                const auto old_z = static_cast<std::size_t>(td.topics[n]);
                --n_dk[old_z];
                --topic_word[old_z * v_count + w];
                --topic_total[old_z];

                double total = 0.0;
                for (std::size_t k = 0; k < k_count; ++k) {
                    const double weight =
                        (static_cast<double>(n_dk[k]) + alpha) *
                        (static_cast<double>(topic_word[k * v_count + w]) + beta) /
                        (static_cast<double>(topic_total[k]) + v_beta);
                    total += weight;
                    weights[k] = total;
                }
                const double u = td.rng.next_double() * total;
                std::size_t new_z = 0;
                while (new_z + 1 < k_count && weights[new_z] < u) ++new_z;

                td.topics[n] = static_cast<int>(new_z);
                ++n_dk[new_z];
                ++topic_word[new_z * v_count + w];
                ++topic_total[new_z];
            }
        }

        if (options.check_invariants) {
            for (std::size_t d = 0; d < train_docs.size(); ++d) {
                long sum = 0;
                for (const long c : doc_topic[d]) sum += c;
                if (sum != static_cast<long>(train_docs[d].words.size())) {
                    throw std::logic_error("count conservation violated (doc)");
                }
            }
            long sum = 0;
            for (const long c : topic_total) sum += c;
            if (sum != total_tokens) {
                throw std::logic_error("count conservation violated (corpus)");
            }
        }
        if (options.checkpoint_every > 0 && options.on_checkpoint &&
            (sweep % options.checkpoint_every == 0 ||
             sweep == options.iterations)) {
            options.on_checkpoint(
                sweep, snapshot_model(topic_count, alpha, beta, vocab,
                                      topic_word, topic_total, options.seed,
                                      sweep, skipped));
        }
    }

    return snapshot_model(topic_count, alpha, beta, vocab, topic_word,
                          topic_total, options.seed, options.iterations,
                          skipped);
}

std::vector<double> infer_theta(const LdaModel& model,
                                std::span<const int> token_ids,
                                const InferParams& params, std::uint64_t seed) {
    const auto k_count = static_cast<std::size_t>(model.topic_count);
    std::vector<double> theta(k_count,
                              1.0 / static_cast<double>(model.topic_count));
    if (token_ids.empty()) return theta;

    const auto v_count = static_cast<std::size_t>(model.vocab.size());
    const double v_beta = static_cast<double>(model.vocab.size()) * model.beta;

    Rng rng(seed);
    std::vector<int> topics(token_ids.size());
    std::vector<long> n_dk(k_count, 0);
    for (std::size_t n = 0; n < token_ids.size(); ++n) {
        const int z = static_cast<int>(rng.next_below(k_count));
        topics[n] = z;
        ++n_dk[static_cast<std::size_t>(z)];
    }

    std::vector<double> weights(k_count);
    std::vector<double> accum(k_count, 0.0);
    int taken = 0;
    const int total_sweeps = params.burn_in + params.samples;
    const double denom = static_cast<double>(token_ids.size()) +
                         static_cast<double>(model.topic_count) * model.alpha;

    for (int sweep = 0; sweep < total_sweeps; ++sweep) {
        for (std::size_t n = 0; n < token_ids.size(); ++n) {
            const auto w = static_cast<std::size_t>(token_ids[n]);
            const auto old_z = static_cast<std::size_t>(topics[n]);
            --n_dk[old_z];
            double total = 0.0;
            for (std::size_t k = 0; k < k_count; ++k) {
                const double weight =
                    (static_cast<double>(n_dk[k]) + model.alpha) *
                    (static_cast<double>(model.topic_word_counts[k * v_count + w]) +
                     model.beta) /
                    (static_cast<double>(model.topic_totals[k]) + v_beta);
                total += weight;
                weights[k] = total;
            }
            const double u = rng.next_double() * total;
            std::size_t new_z = 0;
            while (new_z + 1 < k_count && weights[new_z] < u) ++new_z;
            topics[n] = static_cast<int>(new_z);
            ++n_dk[new_z];
        }
        if (sweep >= params.burn_in) {
            for (std::size_t k = 0; k < k_count; ++k) {
                accum[k] += (static_cast<double>(n_dk[k]) + model.alpha) / denom;
            }
            ++taken;
        }
    }
    if (taken == 0) {  // samples == 0: single read after burn-in
        for (std::size_t k = 0; k < k_count; ++k) {
            theta[k] = (static_cast<double>(n_dk[k]) + model.alpha) / denom;
        }
        return theta;
    }
    for (std::size_t k = 0; k < k_count; ++k) {
        theta[k] = accum[k] / taken;
    }
    return theta;
}

std::vector<double> infer_theta(const LdaModel& model, const Document& doc,
                                const InferParams& params, std::uint64_t seed) {
    const std::vector<int> ids = model.vocab.token_ids(doc.text);
    return infer_theta(model, ids, params,
                       Rng::substream(seed, Rng::hash(doc.id)).next_u64());
}

std::vector<std::vector<double>> infer_thetas(const LdaModel& model,
                                              std::span<const Document> docs,
                                              const InferParams& params,
                                              std::uint64_t seed, Exec exec) {
    std::vector<std::vector<double>> thetas(docs.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(docs.size());
             ++i) {
            const auto idx = static_cast<std::size_t>(i);
            thetas[idx] = infer_theta(model, docs[idx], params, seed);
        }
    } else {
        for (std::size_t i = 0; i < docs.size(); ++i) {
            thetas[i] = infer_theta(model, docs[i], params, seed);
        }
    }
    return thetas;
}

std::vector<std::pair<std::string, double>> top_words(const LdaModel& model,
                                                      int topic, int m) {
    if (topic < 0 || topic >= model.topic_count) {
        throw std::invalid_argument("top_words: topic out of range");
    }
    if (m < 1) throw std::invalid_argument("top_words: m must be >= 1");
    std::vector<std::pair<std::string, double>> items;
    items.reserve(static_cast<std::size_t>(model.vocab.size()));
    for (int w = 0; w < model.vocab.size(); ++w) {
        items.emplace_back(model.vocab.token(w), model.phi(topic, w));
    }
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(items.size()) > m) {
        items.resize(static_cast<std::size_t>(m));
    }
    return items;
}

std::string_view to_string(FeatureMode m) {
    return m == FeatureMode::distribution ? "distribution" : "count";
}

DayFeatureVector day_feature_vector(const LdaModel& model,
                                    const DayBucket& bucket,
                                    std::span<const Document> docs,
                                    FeatureMode mode, const InferParams& params,
                                    std::uint64_t seed) {
    const auto k_count = static_cast<std::size_t>(model.topic_count);
    DayFeatureVector out;
    out.trading_day = bucket.trading_day;
    out.features.assign(k_count, 0.0);

    if (bucket.doc_indices.empty()) {
        if (mode == FeatureMode::distribution) {
            out.features.assign(k_count,
                                1.0 / static_cast<double>(model.topic_count));
        }
        return out;
    }

    // id order keeps the mean independent of how the corpus was ordered
    std::vector<std::uint32_t> ordered(bucket.doc_indices);
    std::sort(ordered.begin(), ordered.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                  return docs[a].id < docs[b].id;
              });

    for (const std::uint32_t idx : ordered) {
        const std::vector<double> theta =
            infer_theta(model, docs[idx], params, seed);
        if (mode == FeatureMode::distribution) {
            for (std::size_t k = 0; k < k_count; ++k) {
                out.features[k] += theta[k];
            }
        } else {
            const std::size_t arg_max = static_cast<std::size_t>(
                std::max_element(theta.begin(), theta.end()) - theta.begin());
            out.features[arg_max] += 1.0;
        }
    }
    if (mode == FeatureMode::distribution) {
        for (double& f : out.features) {
            f /= static_cast<double>(ordered.size());
        }
    }
    return out;
}

double perplexity(const LdaModel& model, std::span<const Document> docs,
                  const InferParams& params, std::uint64_t seed) {
    double log_likelihood = 0.0;
    long total_tokens = 0;
    for (const auto& doc : docs) {
        const std::vector<int> ids = model.vocab.token_ids(doc.text);
        if (ids.empty()) continue;
        const std::vector<double> theta = infer_theta(
            model, ids, params, Rng::substream(seed, Rng::hash(doc.id)).next_u64());
        for (const int w : ids) {
            double p = 0.0;
            for (int k = 0; k < model.topic_count; ++k) {
                p += theta[static_cast<std::size_t>(k)] * model.phi(k, w);
            }
            log_likelihood += std::log(p);
            ++total_tokens;
        }
    }
    if (total_tokens == 0) {
        throw std::invalid_argument("perplexity: no in-vocabulary tokens");
    }
    return std::exp(-log_likelihood / static_cast<double>(total_tokens));
}

void save_model(const LdaModel& model, const std::string& path) {
    std::ostringstream out;
    out << "sentvol-lda 1\n";
    out << "K " << model.topic_count << "\n";
    out << "alpha " << format_double(model.alpha) << "\n";
    out << "beta " << format_double(model.beta) << "\n";
    out << "seed " << model.seed << "\n";
    out << "iterations " << model.iterations << "\n";
    out << "skipped_empty_docs " << model.skipped_empty_docs << "\n";
    out << "V " << model.vocab.size() << "\n";
    for (int w = 0; w < model.vocab.size(); ++w) {
        out << model.vocab.token(w) << " " << model.vocab.doc_freq(w) << "\n";
    }
    for (int k = 0; k < model.topic_count; ++k) {
        out << model.topic_totals[static_cast<std::size_t>(k)];
        out << (k + 1 == model.topic_count ? "\n" : " ");
    }
    const auto v_count = static_cast<std::size_t>(model.vocab.size());
    for (int k = 0; k < model.topic_count; ++k) {
        for (std::size_t w = 0; w < v_count; ++w) {
            out << model.topic_word_counts[static_cast<std::size_t>(k) * v_count + w];
            out << (w + 1 == v_count ? "\n" : " ");
        }
    }
    write_text_file(path, out.str());
}

LdaModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "sentvol-lda" || version != 1) {
        throw std::runtime_error(path + ": not a sentvol-lda v1 model file");
    }
    LdaModel model;
    std::string key;
    int v_count = 0;
    in >> key >> model.topic_count;
    in >> key >> model.alpha;
    in >> key >> model.beta;
    in >> key >> model.seed;
    in >> key >> model.iterations;
    in >> key >> model.skipped_empty_docs;
    in >> key >> v_count;
    if (!in || model.topic_count < 1 || v_count < 1) {
        throw std::runtime_error(path + ": corrupt model header");
    }
    std::vector<std::string> tokens(static_cast<std::size_t>(v_count));
    std::vector<int> doc_freq(static_cast<std::size_t>(v_count));
    for (int w = 0; w < v_count; ++w) {
        in >> tokens[static_cast<std::size_t>(w)] >>
            doc_freq[static_cast<std::size_t>(w)];
    }
    model.vocab = Vocabulary::from_tokens(std::move(tokens), std::move(doc_freq));
    model.topic_totals.resize(static_cast<std::size_t>(model.topic_count));
    for (auto& total : model.topic_totals) in >> total;
    model.topic_word_counts.resize(static_cast<std::size_t>(model.topic_count) *
                                   static_cast<std::size_t>(v_count));
    for (auto& count : model.topic_word_counts) in >> count;
    if (!in) throw std::runtime_error(path + ": truncated model file");
    return model;
}

}  // namespace sentvol
