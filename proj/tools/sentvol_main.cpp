// Command-line front end: ingest -> score -> aggregate -> market ->
// correlate/granger -> topics -> classify -> report.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sentvol/io_util.hpp"
#include "sentvol/pipeline.hpp"
#include "sentvol/rng.hpp"
#include "sentvol/sha256.hpp"

namespace {

using namespace sentvol;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CliOptions {
    RunConfig run;
    std::string source_name = "none";
    std::string feature_mode_name = "distribution";
};

void add_common_options(CLI::App* cmd, CliOptions& opts, bool need_docs,
                        bool need_prices, bool need_lexicon) {
    auto* docs = cmd->add_option("--documents", opts.run.documents_path,
                                 "line-delimited JSON documents file");
    docs->check(CLI::ExistingFile);
    if (need_docs) docs->required();
    auto* prices = cmd->add_option("--prices", opts.run.prices_path,
                                   "CSV price file with header date,close");
    prices->check(CLI::ExistingFile);
    if (need_prices) prices->required();
    auto* lexicon = cmd->add_option("--lexicon", opts.run.lexicon_path,
                                    "tab-separated sentiment lexicon");
    lexicon->check(CLI::ExistingFile);
    if (need_lexicon) lexicon->required();
    cmd->add_option("--out", opts.run.output_dir, "output directory")
        ->required();
    cmd->add_option("--dataset-name", opts.run.dataset_name,
                    "label used in report rows");
    cmd->add_option("--source", opts.source_name,
                    "only use documents from this source")
        ->check(CLI::IsMember({"none", "headline", "tweet", "story"}));
    cmd->add_option("--seed", opts.run.seed, "global RNG seed");

    cmd->add_option("--exclaim-increment", opts.run.rules.exclaim_increment);
    cmd->add_option("--question-increment", opts.run.rules.question_increment);
    cmd->add_option("--exclaim-cap", opts.run.rules.exclaim_cap);
    cmd->add_option("--question-cap", opts.run.rules.question_cap);
    cmd->add_option("--question-max", opts.run.rules.question_max);
    cmd->add_option("--negation-window", opts.run.rules.negation_window);
    cmd->add_option("--negation-scalar", opts.run.rules.negation_scalar);
    cmd->add_option("--caps-increment", opts.run.rules.caps_increment);
    cmd->add_option("--normalization-alpha",
                    opts.run.rules.normalization_alpha);
    cmd->add_option("--pos-threshold", opts.run.rules.pos_threshold);
    cmd->add_option("--neg-threshold", opts.run.rules.neg_threshold);
    cmd->add_flag("--extended-clause-rules,!--no-extended-clause-rules",
                  opts.run.rules.extended_clause_rules,
                  "'but' reweighting and multiword idioms");
}

void add_market_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--vol-window", opts.run.vol_window,
                    "trailing window (trading days) for volatility")
        ->check(CLI::Range(2, 100000));
    cmd->add_flag("--vol-sample-divisor", opts.run.vol_sample_divisor,
                  "use 1/(N-1) instead of 1/N in the volatility window");
}

void add_topic_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--topics", opts.run.lda_topics, "number of LDA topics")
        ->check(CLI::Range(1, 10000));
    cmd->add_option("--lda-alpha", opts.run.lda_alpha,
                    "document-topic prior (<=0 selects 50/K)");
    cmd->add_option("--lda-beta", opts.run.lda_beta, "topic-word prior");
    cmd->add_option("--lda-iterations", opts.run.lda_iterations)
        ->check(CLI::Range(1, 1000000));
    cmd->add_option("--burn-in", opts.run.infer_burn_in);
    cmd->add_option("--samples", opts.run.infer_samples);
    cmd->add_option("--min-df", opts.run.vocab_min_df);
    cmd->add_option("--max-df-fraction", opts.run.vocab_max_df_fraction);
    cmd->add_option("--feature-mode", opts.feature_mode_name)
        ->check(CLI::IsMember({"distribution", "count"}));
    cmd->add_option("--stopwords", opts.run.stopwords_path,
                    "stopword list, one token per line")
        ->check(CLI::ExistingFile)
        ->required();
}

void add_classifier_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--split-fraction", opts.run.split_fraction)
        ->check(CLI::Range(0.01, 0.99));
    cmd->add_option("--learning-rate", opts.run.classifier.learning_rate);
    cmd->add_option("--epochs", opts.run.classifier.epochs)
        ->check(CLI::Range(1, 10000000));
    cmd->add_option("--l2-lambda", opts.run.classifier.l2_lambda);
}

void finalize_options(CliOptions& opts) {
    if (opts.source_name != "none") {
        opts.run.source_filter = source_from_string(opts.source_name);
    }
    opts.run.feature_mode = opts.feature_mode_name == "count"
                                ? FeatureMode::count
                                : FeatureMode::distribution;
}

// --- day-feature CSV helpers shared by topics-infer / classify-* ---

void write_day_features(const std::string& path,
                        std::span<const DayFeatureVector> features,
                        const std::string& meta) {
    std::ostringstream out;
    out << meta;
    out << "date";
    const std::size_t k_count =
        features.empty() ? 0 : features.front().features.size();
    for (std::size_t k = 0; k < k_count; ++k) out << ",f" << k;
    out << "\n";
    for (const auto& fv : features) {
        out << to_string(fv.trading_day);
        for (const double f : fv.features) out << "," << format_double(f);
        out << "\n";
    }
    write_text_file(path, out.str());
}

std::vector<DayFeatureVector> read_day_features(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::vector<DayFeatureVector> features;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // "date,f0,..."
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() < 2) continue;
        DayFeatureVector fv;
        fv.trading_day = parse_date(cols[0]);
        for (std::size_t i = 1; i < cols.size(); ++i) {
            fv.features.push_back(std::strtod(cols[i].c_str(), nullptr));
        }
        features.push_back(std::move(fv));
    }
    if (features.empty()) {
        throw std::runtime_error(path + ": no feature rows");
    }
    return features;
}

LabelResult labels_from_prices(const RunConfig& cfg) {
    const PriceSeries prices = load_prices(cfg.prices_path);
    const MarketSeries market =
        build_market_series(prices, cfg.vol_window, cfg.vol_sample_divisor);
    const std::span<const Date> vol_dates{
        market.dates.data() + market.vol_index_offset(),
        market.volatility.size()};
    return direction_labels(market.volatility, vol_dates);
}

std::string features_meta(const RunConfig& cfg) {
    return std::string("# ") + kToolName + " " + kToolVersion +
           " config=" + config_hash(cfg, ConfigScope::topics).substr(0, 16) +
           " seed=" + std::to_string(cfg.seed) + "\n";
}

void print_eval(const char* label, const EvalReport& r) {
    std::printf("%s: accuracy %.4f precision %.4f recall %.4f f1 %.4f "
                "(tp %ld fp %ld fn %ld tn %ld)\n",
                label, r.accuracy, r.precision, r.recall, r.f1, r.tp, r.fp,
                r.fn, r.tn);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sentiment, market statistics and topic-based volatility "
                 "direction prediction"};
    app.set_version_flag("--version",
                         std::string(kToolName) + " " + kToolVersion);
    // INI file with one section per subcommand, e.g. [pipeline]; any key can
    // be overridden by the flag of the same name
    app.set_config("--config", "", "read options from an INI file")
        ->configurable(false);
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    CliOptions opts;
    int exit_code = 0;

    // score: per-document sentiment CSV
    auto* score = app.add_subcommand("score", "score documents with the lexicon engine");
    add_common_options(score, opts, true, false, true);
    score->callback([&] {
        finalize_options(opts);
        run_score(opts.run);
        std::printf("wrote %s/scores.csv\n", opts.run.output_dir.c_str());
    });

    // aggregate: daily sentiment CSV
    auto* aggregate = app.add_subcommand("aggregate", "aggregate document scores per trading day");
    add_common_options(aggregate, opts, true, true, true);
    aggregate->callback([&] {
        finalize_options(opts);
        run_aggregate(opts.run);
        std::printf("wrote %s/daily_sentiment.csv\n",
                    opts.run.output_dir.c_str());
    });

    // market: returns, volatility, direction labels
    auto* market = app.add_subcommand("market", "compute returns, volatility and direction labels");
    market->add_option("--prices", opts.run.prices_path)
        ->check(CLI::ExistingFile)
        ->required();
    market->add_option("--out", opts.run.output_dir)->required();
    market->add_option("--seed", opts.run.seed);
    add_market_options(market, opts);
    market->callback([&] {
        finalize_options(opts);
        run_market(opts.run);
        std::printf("wrote %s/market.csv\n", opts.run.output_dir.c_str());
    });

    // correlate: the full sentiment x market grid
    auto* correlate = app.add_subcommand("correlate", "correlation grid of sentiment vs returns/volatility");
    add_common_options(correlate, opts, true, true, true);
    add_market_options(correlate, opts);
    correlate->callback([&] {
        finalize_options(opts);
        const auto grid = run_correlate(opts.run);
        std::printf("wrote %s/correlations.csv and heatmap.txt (%zu cells)\n",
                    opts.run.output_dir.c_str(), grid.size());
        for (const auto& cell : grid) {
            std::printf("%-9s %-10s lag %d: r=%+.4f p=%.4g n=%d%s\n",
                        std::string(to_string(cell.dim)).c_str(),
                        std::string(to_string(cell.target)).c_str(), cell.lag,
                        cell.result.r, cell.result.p_value, cell.result.n,
                        cell.significant ? " *" : "");
        }
    });

    // granger: nested-model F tests in both causal directions
    auto* granger = app.add_subcommand("granger", "Granger causality tests between daily sentiment and the market");
    add_common_options(granger, opts, true, true, true);
    add_market_options(granger, opts);
    granger->add_option("--granger-lags", opts.run.granger_lags,
                        "lag orders to test");
    granger->callback([&] {
        finalize_options(opts);
        const auto rows = run_granger(opts.run);
        std::printf("wrote %s/granger.csv\n", opts.run.output_dir.c_str());
        for (const auto& row : rows) {
            std::printf("%-24s lag %d: F=%.4f p=%.4g\n", row.direction.c_str(),
                        row.lag, row.f_stat, row.p_value);
        }
    });

    // topics-train: fit an LDA model on a document file
    auto* topics_train = app.add_subcommand("topics-train", "train the LDA topic model");
    add_common_options(topics_train, opts, true, false, true);
    add_topic_options(topics_train, opts);
    topics_train->callback([&] {
        finalize_options(opts);
        const DocumentSet docs =
            load_documents(opts.run.documents_path, opts.run.source_filter);
        const auto stopwords = load_stopwords(opts.run.stopwords_path);
        const Vocabulary vocab =
            Vocabulary::build(docs.docs, stopwords, opts.run.vocab_min_df,
                              opts.run.vocab_max_df_fraction);
        TrainOptions train_options;
        train_options.iterations = opts.run.lda_iterations;
        train_options.seed = opts.run.seed;
        const LdaModel model =
            gibbs_train(docs.docs, vocab, opts.run.lda_topics,
                        opts.run.lda_alpha, opts.run.lda_beta, train_options);
        std::filesystem::create_directories(opts.run.output_dir);
        save_model(model, opts.run.output_dir + "/topics_model.txt");
        std::printf("trained K=%d model on %zu docs (V=%d), wrote %s\n",
                    model.topic_count, docs.docs.size(), model.vocab.size(),
                    (opts.run.output_dir + "/topics_model.txt").c_str());
        for (int k = 0; k < model.topic_count; ++k) {
            std::printf("topic %2d:", k);
            for (const auto& [token, phi] : top_words(model, k, 10)) {
                std::printf(" %s", token.c_str());
            }
            std::printf("\n");
        }
    });

    // topics-infer: day-level feature vectors from a trained model
    auto* topics_infer = app.add_subcommand("topics-infer", "infer per-day topic feature vectors");
    add_common_options(topics_infer, opts, true, true, true);
    add_market_options(topics_infer, opts);
    std::string model_path;
    topics_infer->add_option("--model", model_path, "trained LDA model file")
        ->check(CLI::ExistingFile)
        ->required();
    topics_infer->add_option("--burn-in", opts.run.infer_burn_in);
    topics_infer->add_option("--samples", opts.run.infer_samples);
    topics_infer->add_option("--feature-mode", opts.feature_mode_name)
        ->check(CLI::IsMember({"distribution", "count"}));
    topics_infer->callback([&] {
        finalize_options(opts);
        const LdaModel model = load_model(model_path);
        const DocumentSet docs =
            load_documents(opts.run.documents_path, opts.run.source_filter);
        const PriceSeries prices = load_prices(opts.run.prices_path);
        const TradingCalendar cal = TradingCalendar::from_prices(prices);
        const BucketResult buckets = bucket_by_day(docs.docs, cal);
        const InferParams infer{opts.run.infer_burn_in, opts.run.infer_samples};
        std::vector<DayFeatureVector> features;
        features.reserve(buckets.buckets.size());
        for (const auto& bucket : buckets.buckets) {
            features.push_back(day_feature_vector(model, bucket, docs.docs,
                                                  opts.run.feature_mode, infer,
                                                  opts.run.seed));
        }
        std::filesystem::create_directories(opts.run.output_dir);
        write_day_features(opts.run.output_dir + "/day_features.csv", features,
                           features_meta(opts.run));
        std::printf("wrote %s/day_features.csv (%zu days)\n",
                    opts.run.output_dir.c_str(), features.size());
    });

    // classify-train: fit the direction classifier on day features
    auto* classify_train = app.add_subcommand("classify-train", "train the volatility-direction classifier");
    std::string features_path;
    classify_train->add_option("--features", features_path,
                               "day_features.csv from topics-infer")
        ->check(CLI::ExistingFile)
        ->required();
    classify_train->add_option("--prices", opts.run.prices_path)
        ->check(CLI::ExistingFile)
        ->required();
    classify_train->add_option("--out", opts.run.output_dir)->required();
    classify_train->add_option("--seed", opts.run.seed);
    add_market_options(classify_train, opts);
    add_classifier_options(classify_train, opts);
    classify_train->callback([&] {
        finalize_options(opts);
        const auto features = read_day_features(features_path);
        const LabelResult labels = labels_from_prices(opts.run);
        const LabeledDataset dataset =
            make_dataset(features, labels.labels, opts.run.split_fraction);
        const LogisticModel model =
            train_classifier(dataset, opts.run.classifier);
        std::filesystem::create_directories(opts.run.output_dir);
        save_classifier(model,
                        static_cast<int>(dataset.rows.front().features.size()),
                        opts.run.feature_mode,
                        opts.run.output_dir + "/classifier.txt");
        print_eval("train", evaluate(model, dataset.train()));
        std::printf("wrote %s/classifier.txt (n_train=%zu n_test=%zu)\n",
                    opts.run.output_dir.c_str(), dataset.n_train,
                    dataset.rows.size() - dataset.n_train);
    });

    // classify-eval: evaluate a saved classifier on the held-out test split
    auto* classify_eval = app.add_subcommand("classify-eval", "evaluate the classifier on the held-out split");
    std::string classifier_path;
    classify_eval->add_option("--classifier", classifier_path)
        ->check(CLI::ExistingFile)
        ->required();
    classify_eval->add_option("--features", features_path)
        ->check(CLI::ExistingFile)
        ->required();
    classify_eval->add_option("--prices", opts.run.prices_path)
        ->check(CLI::ExistingFile)
        ->required();
    classify_eval->add_option("--out", opts.run.output_dir)->required();
    classify_eval->add_option("--seed", opts.run.seed);
    add_market_options(classify_eval, opts);
    add_classifier_options(classify_eval, opts);
    classify_eval->callback([&] {
        finalize_options(opts);
        const LogisticModel model = load_classifier(classifier_path);
        const auto features = read_day_features(features_path);
        const LabelResult labels = labels_from_prices(opts.run);
        const LabeledDataset dataset =
            make_dataset(features, labels.labels, opts.run.split_fraction);
        const EvalReport test = evaluate(model, dataset.test());
        const EvalReport train = evaluate(model, dataset.train());
        print_eval("test", test);
        print_eval("in-sample", train);
        std::filesystem::create_directories(opts.run.output_dir);
        std::ostringstream out;
        out << "{\n \"test_accuracy\": " << format_double(test.accuracy)
            << ",\n \"test_precision\": " << format_double(test.precision)
            << ",\n \"test_recall\": " << format_double(test.recall)
            << ",\n \"test_f1\": " << format_double(test.f1)
            << ",\n \"in_sample_accuracy\": " << format_double(train.accuracy)
            << ",\n \"confusion\": [[" << test.tp << "," << test.fn << "],["
            << test.fp << "," << test.tn << "]]\n}\n";
        write_text_file(opts.run.output_dir + "/eval.json", out.str());
        std::printf("wrote %s/eval.json\n", opts.run.output_dir.c_str());
    });

    // pipeline: the whole experiment in one command
    auto* pipeline = app.add_subcommand("pipeline", "run the full experiment end to end");
    add_common_options(pipeline, opts, true, true, true);
    add_market_options(pipeline, opts);
    add_topic_options(pipeline, opts);
    add_classifier_options(pipeline, opts);
    pipeline->add_option("--granger-lags", opts.run.granger_lags);
    pipeline->callback([&] {
        finalize_options(opts);
        const PipelineResult result = run_pipeline(opts.run);
        std::printf("pipeline complete, %zu artifacts in %s\n",
                    result.files.size(), opts.run.output_dir.c_str());
        std::printf("config %s\n", result.full_config_hash.substr(0, 16).c_str());
        print_eval("test", result.test_report);
        print_eval("in-sample", result.train_report);
        std::printf("n_train=%zu n_test=%zu base_rate_up=%.3f ties=%d\n",
                    result.n_train, result.n_test, result.test_base_rate_up,
                    result.label_ties);
    });

    // synth: deterministic synthetic corpus + prices
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus and price series");
    SynthConfig synth_config;
    std::string synth_out;
    synth->add_option("--out", synth_out)->required();
    synth->add_option("--days", synth_config.n_trading_days)
        ->check(CLI::Range(30, 100000));
    synth->add_option("--docs-per-day", synth_config.docs_per_day)
        ->check(CLI::Range(1, 10000));
    synth->add_option("--vol-window", synth_config.vol_window)
        ->check(CLI::Range(2, 1000));
    synth->add_option("--seed", synth_config.seed);
    synth->callback([&] {
        const SynthData data = generate_synthetic(synth_config);
        write_synthetic(data, synth_out);
        std::printf("wrote %s/documents.jsonl (%zu docs) and prices.csv (%zu days)\n",
                    synth_out.c_str(), data.documents.size(),
                    data.prices.bars.size());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return exit_code;
}
