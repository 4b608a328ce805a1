#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sentvol/classify.hpp"
#include "sentvol/stats.hpp"
#include "sentvol/synth.hpp"

namespace sentvol {

inline constexpr const char* kToolName = "sentvol";
inline constexpr const char* kToolVersion = "1.0.0";

struct RunConfig {
    std::string documents_path;
    std::string prices_path;
    std::string lexicon_path;
    std::string stopwords_path;
    std::string output_dir;
    std::string dataset_name = "all";
    std::optional<Source> source_filter;

    int vol_window = 10;
    bool vol_sample_divisor = false;
    std::vector<int> granger_lags = {1, 2, 3};

    int lda_topics = 15;
    double lda_alpha = 0.0;  // <= 0 selects 50/K
    double lda_beta = 0.01;
    int lda_iterations = 1000;
    int infer_burn_in = 50;
    int infer_samples = 20;
    int vocab_min_df = 2;
    double vocab_max_df_fraction = 0.5;

    FeatureMode feature_mode = FeatureMode::distribution;
    double split_fraction = 0.8;
    ClassifierConfig classifier;
    RuleConfig rules;
    std::uint64_t seed = 42;
};

// Stage scopes for config hashing. Each output artifact embeds the hash of
// the config subset it actually depends on, so changing (say) the volatility
// window leaves the sentiment artifacts byte-identical while market and
// downstream artifacts change.
enum class ConfigScope { sentiment, market, granger, topics, classify, full };

std::string canonical_config_text(const RunConfig& cfg,
                                  ConfigScope scope = ConfigScope::full);
std::string config_hash(const RunConfig& cfg,
                        ConfigScope scope = ConfigScope::full);

struct GridCell {
    SentimentDim dim;
    MarketTarget target;
    int lag = 0;
    CorrelationResult result;
    bool significant = false;  // p < 0.05
};

struct GrangerRow {
    std::string direction;
    int lag = 0;
    double f_stat = 0.0;
    double p_value = 1.0;
};

struct StageFile {
    std::string stage;
    std::string filename;  // relative to output_dir
    std::string sha256;
};

struct PipelineResult {
    std::string full_config_hash;
    std::vector<StageFile> files;
    std::vector<GridCell> grid;
    std::vector<GrangerRow> granger;
    EvalReport test_report;
    EvalReport train_report;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double test_base_rate_up = 0.0;
    int label_ties = 0;
};

// Individual stages (each loads what it needs and writes its artifact).
void run_score(const RunConfig& cfg);      // scores.csv
void run_aggregate(const RunConfig& cfg);  // daily_sentiment.csv
void run_market(const RunConfig& cfg);     // market.csv
std::vector<GridCell> run_correlate(const RunConfig& cfg);
std::vector<GrangerRow> run_granger(const RunConfig& cfg);

// Full experiment: score -> aggregate -> market -> correlate -> granger ->
// topics -> features -> classifier -> reports + manifest. The first failing
// stage aborts with its name in the error message.
PipelineResult run_pipeline(const RunConfig& cfg);

}  // namespace sentvol
