#include "sentvol/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "sentvol/io_util.hpp"
#include "sentvol/sha256.hpp"

namespace sentvol {

namespace {

void append_rule_keys(std::map<std::string, std::string>& kv,
                      const RuleConfig& r) {
    kv["rules.exclaim_increment"] = format_double(r.exclaim_increment);
    kv["rules.question_increment"] = format_double(r.question_increment);
    kv["rules.exclaim_cap"] = std::to_string(r.exclaim_cap);
    kv["rules.question_cap"] = std::to_string(r.question_cap);
    kv["rules.question_max"] = format_double(r.question_max);
    kv["rules.negation_window"] = std::to_string(r.negation_window);
    kv["rules.negation_scalar"] = format_double(r.negation_scalar);
    kv["rules.caps_increment"] = format_double(r.caps_increment);
    kv["rules.normalization_alpha"] = format_double(r.normalization_alpha);
    kv["rules.pos_threshold"] = format_double(r.pos_threshold);
    kv["rules.neg_threshold"] = format_double(r.neg_threshold);
    kv["rules.extended_clause_rules"] =
        r.extended_clause_rules ? "1" : "0";
}

std::map<std::string, std::string> config_keys(const RunConfig& cfg,
                                               ConfigScope scope) {
    std::map<std::string, std::string> kv;
    kv["dataset_name"] = cfg.dataset_name;
    kv["source_filter"] =
        cfg.source_filter ? std::string(to_string(*cfg.source_filter)) : "none";
    kv["seed"] = std::to_string(cfg.seed);
    append_rule_keys(kv, cfg.rules);
    if (scope == ConfigScope::sentiment) return kv;

    kv["vol_window"] = std::to_string(cfg.vol_window);
    kv["vol_sample_divisor"] = cfg.vol_sample_divisor ? "1" : "0";
    if (scope == ConfigScope::market) return kv;

    std::string lags;
    for (const int k : cfg.granger_lags) {
        if (!lags.empty()) lags += ",";
        lags += std::to_string(k);
    }
    kv["granger_lags"] = lags;
    if (scope == ConfigScope::granger) return kv;

    kv["lda_topics"] = std::to_string(cfg.lda_topics);
    kv["lda_alpha"] = format_double(cfg.lda_alpha);
    kv["lda_beta"] = format_double(cfg.lda_beta);
    kv["lda_iterations"] = std::to_string(cfg.lda_iterations);
    kv["infer_burn_in"] = std::to_string(cfg.infer_burn_in);
    kv["infer_samples"] = std::to_string(cfg.infer_samples);
    kv["vocab_min_df"] = std::to_string(cfg.vocab_min_df);
    kv["vocab_max_df_fraction"] = format_double(cfg.vocab_max_df_fraction);
    kv["split_fraction"] = format_double(cfg.split_fraction);
    kv["feature_mode"] = std::string(to_string(cfg.feature_mode));
    if (scope == ConfigScope::topics) return kv;

    kv["classifier.learning_rate"] = format_double(cfg.classifier.learning_rate);
    kv["classifier.epochs"] = std::to_string(cfg.classifier.epochs);
    kv["classifier.l2_lambda"] = format_double(cfg.classifier.l2_lambda);
    return kv;
}

std::string meta_line(const RunConfig& cfg, ConfigScope scope) {
    return std::string("# ") + kToolName + " " + kToolVersion +
           " config=" + config_hash(cfg, scope).substr(0, 16) +
           " seed=" + std::to_string(cfg.seed) + "\n";
}

nlohmann::ordered_json meta_json(const RunConfig& cfg, ConfigScope scope) {
    nlohmann::ordered_json meta;
    meta["tool"] = kToolName;
    meta["version"] = kToolVersion;
    meta["config"] = config_hash(cfg, scope);
    meta["seed"] = cfg.seed;
    return meta;
}

struct BaseData {
    Lexicon lexicon;
    DocumentSet documents;
    PriceSeries prices;
    TradingCalendar calendar = TradingCalendar::from_days({Date{}});
};

BaseData load_base(const RunConfig& cfg, bool need_prices = true) {
    BaseData base;
    base.lexicon = Lexicon::load(cfg.lexicon_path);
    if (need_prices) {
        base.prices = load_prices(cfg.prices_path);
        base.calendar = TradingCalendar::from_prices(base.prices);
    }
    base.documents = load_documents(cfg.documents_path, cfg.source_filter);
    return base;
}

std::string render_scores_csv(const RunConfig& cfg,
                              std::span<const Document> docs,
                              std::span<const SentimentScores> scores) {
    std::ostringstream out;
    out << meta_line(cfg, ConfigScope::sentiment);
    out << "id,date,neg,neu,pos,compound,polarity\n";
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto& s = scores[i];
        out << docs[i].id << "," << to_string(docs[i].utc_date) << ","
            << format_double(s.neg) << "," << format_double(s.neu) << ","
            << format_double(s.pos) << "," << format_double(s.compound) << ","
            << to_string(classify_polarity(s, cfg.rules)) << "\n";
    }
    return out.str();
}

std::string render_daily_csv(const RunConfig& cfg,
                             std::span<const DailySentiment> daily) {
    std::ostringstream out;
    out << meta_line(cfg, ConfigScope::sentiment);
    out << "date,neg,pos,neu,compound,sentd,n_pos,n_neg,n_neut,n_docs\n";
    for (const auto& d : daily) {
        out << to_string(d.trading_day) << "," << format_double(d.mean_neg)
            << "," << format_double(d.mean_pos) << ","
            << format_double(d.mean_neu) << "," << format_double(d.mean_compound)
            << "," << format_double(d.sentd) << "," << d.n_pos << "," << d.n_neg
            << "," << d.n_neut << "," << d.n_docs << "\n";
    }
    return out.str();
}

std::string render_market_csv(const RunConfig& cfg, const MarketSeries& market,
                              const LabelResult& labels) {
    std::unordered_map<std::int64_t, bool> label_by_date;
    for (const auto& l : labels.labels) {
        label_by_date.emplace(day_number(l.date), l.up);
    }
    std::ostringstream out;
    out << meta_line(cfg, ConfigScope::market);
    out << "date,close,return,volatility,direction\n";
    for (std::size_t i = 0; i < market.dates.size(); ++i) {
        out << to_string(market.dates[i]) << ","
            << format_double(market.closes[i]) << ",";
        if (i >= market.return_index_offset()) {
            out << format_double(
                market.returns[i - market.return_index_offset()]);
        }
        out << ",";
        if (i >= market.vol_index_offset() &&
            i - market.vol_index_offset() < market.volatility.size()) {
            out << format_double(
                market.volatility[i - market.vol_index_offset()]);
        }
        out << ",";
        const auto it = label_by_date.find(day_number(market.dates[i]));
        if (it != label_by_date.end()) out << (it->second ? "UP" : "DOWN");
        out << "\n";
    }
    return out.str();
}

std::vector<GridCell> correlation_grid(std::span<const DailySentiment> daily,
                                       const MarketSeries& market) {
    std::vector<GridCell> grid;
    for (const SentimentDim dim :
         {SentimentDim::negative, SentimentDim::positive, SentimentDim::neutral,
          SentimentDim::aggregate}) {
        for (const MarketTarget target :
             {MarketTarget::returns, MarketTarget::volatility}) {
            for (const int lag : {0, 1}) {
                GridCell cell;
                cell.dim = dim;
                cell.target = target;
                cell.lag = lag;
                cell.result = lagged_correlation(daily, market, dim, target, lag);
                cell.significant = cell.result.p_value < 0.05;
                grid.push_back(cell);
            }
        }
    }
    return grid;
}

std::string render_grid_csv(const RunConfig& cfg,
                            std::span<const GridCell> grid) {
    std::ostringstream out;
    out << meta_line(cfg, ConfigScope::market);
    out << "dataset,sentiment_dim,target,lag,r,p,n\n";
    for (const auto& cell : grid) {
        out << cfg.dataset_name << "," << to_string(cell.dim) << ","
            << to_string(cell.target) << "," << cell.lag << ","
            << format_double(cell.result.r) << ","
            << format_double(cell.result.p_value) << "," << cell.result.n
            << "\n";
    }
    return out.str();
}

std::string render_heatmap(const RunConfig& cfg,
                           std::span<const GridCell> grid) {
    const auto cell_of = [&](SentimentDim d, MarketTarget t,
                             int lag) -> const GridCell& {
        for (const auto& cell : grid) {
            if (cell.dim == d && cell.target == t && cell.lag == lag) {
                return cell;
            }
        }
        throw std::logic_error("heatmap: missing grid cell");
    };
    std::ostringstream out;
    out << meta_line(cfg, ConfigScope::market);
    out << "correlation grid for dataset '" << cfg.dataset_name
        << "' (* marks p < 0.05)\n\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %14s %14s %14s %14s\n", "",
                  "returns", "returns t+1", "volatility", "volatility t+1");
    out << line;
    for (const SentimentDim dim :
         {SentimentDim::negative, SentimentDim::positive, SentimentDim::neutral,
          SentimentDim::aggregate}) {
        std::string row(to_string(dim));
        std::snprintf(line, sizeof line, "%-10s", row.c_str());
        out << line;
        for (const MarketTarget target :
             {MarketTarget::returns, MarketTarget::volatility}) {
            for (const int lag : {0, 1}) {
                const auto& cell = cell_of(dim, target, lag);
                std::snprintf(line, sizeof line, " %+13.4f%s", cell.result.r,
                              cell.significant ? "*" : " ");
                out << line;
            }
        }
        out << "\n";
    }
    return out.str();
}

struct AlignedSeries {
    std::vector<double> sentiment;
    std::vector<double> target;
};

AlignedSeries align_for_granger(std::span<const DailySentiment> daily,
                                const MarketSeries& market,
                                MarketTarget target) {
    std::unordered_map<std::int64_t, double> sent_by_date;
    for (const auto& d : daily) {
        sent_by_date.emplace(day_number(d.trading_day), d.sentd);
    }
    AlignedSeries out;
    const std::size_t offset = target == MarketTarget::returns
                                   ? market.return_index_offset()
                                   : market.vol_index_offset();
    const auto& values = target == MarketTarget::returns ? market.returns
                                                         : market.volatility;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const Date date = market.dates[j + offset];
        const auto it = sent_by_date.find(day_number(date));
        if (it == sent_by_date.end()) continue;
        out.sentiment.push_back(it->second);
        out.target.push_back(values[j]);
    }
    return out;
}

std::vector<GrangerRow> granger_rows(std::span<const DailySentiment> daily,
                                     const MarketSeries& market,
                                     std::span<const int> lags) {
    std::vector<GrangerRow> rows;
    for (const MarketTarget target :
         {MarketTarget::returns, MarketTarget::volatility}) {
        const AlignedSeries aligned = align_for_granger(daily, market, target);
        const std::string target_name(to_string(target));
        for (const int k : lags) {
            const GrangerResult fwd =
                granger_test(aligned.sentiment, aligned.target, k);
            rows.push_back(GrangerRow{"sentiment->" + target_name, k,
                                      fwd.f_stat, fwd.p_value});
            const GrangerResult rev =
                granger_test(aligned.target, aligned.sentiment, k);
            rows.push_back(GrangerRow{target_name + "->sentiment", k,
                                      rev.f_stat, rev.p_value});
        }
    }
    return rows;
}

std::string render_granger_csv(const RunConfig& cfg,
                               std::span<const GrangerRow> rows) {
    std::ostringstream out;
    out << meta_line(cfg, ConfigScope::granger);
    out << "direction,lag,F,p\n";
    for (const auto& row : rows) {
        out << row.direction << "," << row.lag << ","
            << format_double(row.f_stat) << "," << format_double(row.p_value)
            << "\n";
    }
    return out.str();
}

void write_stage(const RunConfig& cfg, std::vector<StageFile>& files,
                 const std::string& stage, const std::string& filename,
                 std::string_view content) {
    const std::string path = cfg.output_dir + "/" + filename;
    write_text_file(path, content);
    files.push_back(StageFile{stage, filename, sha256_hex(content)});
}

nlohmann::ordered_json eval_block(const EvalReport& r, std::size_t n,
                                  double base_rate_up) {
    nlohmann::ordered_json block;
    block["accuracy"] = r.accuracy;
    block["precision"] = r.precision;
    block["recall"] = r.recall;
    block["f1"] = r.f1;
    block["confusion"] = {{r.tp, r.fn}, {r.fp, r.tn}};
    block["n"] = n;
    block["base_rate_up"] = base_rate_up;
    block["precision_defined"] = r.precision_defined;
    block["recall_defined"] = r.recall_defined;
    block["f1_defined"] = r.f1_defined;
    return block;
}

double base_rate_up(std::span<const LabeledRow> rows) {
    if (rows.empty()) return 0.0;
    std::size_t up = 0;
    for (const auto& row : rows) up += row.up ? 1 : 0;
    return static_cast<double>(up) / static_cast<double>(rows.size());
}

}  // namespace

std::string canonical_config_text(const RunConfig& cfg, ConfigScope scope) {
    std::ostringstream out;
    for (const auto& [key, value] : config_keys(cfg, scope)) {
        out << key << "=" << value << "\n";
    }
    return out.str();
}

std::string config_hash(const RunConfig& cfg, ConfigScope scope) {
    return sha256_hex(canonical_config_text(cfg, scope));
}

void run_score(const RunConfig& cfg) {
    const BaseData base = load_base(cfg, false);
    const auto scores =
        score_documents(base.documents.docs, base.lexicon, cfg.rules);
    std::filesystem::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/scores.csv",
                    render_scores_csv(cfg, base.documents.docs, scores));
}

void run_aggregate(const RunConfig& cfg) {
    const BaseData base = load_base(cfg);
    const auto scores =
        score_documents(base.documents.docs, base.lexicon, cfg.rules);
    const BucketResult buckets =
        bucket_by_day(base.documents.docs, base.calendar);
    const auto daily = build_daily_series(buckets.buckets, scores, cfg.rules);
    std::filesystem::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/daily_sentiment.csv",
                    render_daily_csv(cfg, daily));
}

void run_market(const RunConfig& cfg) {
    const PriceSeries prices = load_prices(cfg.prices_path);
    const MarketSeries market =
        build_market_series(prices, cfg.vol_window, cfg.vol_sample_divisor);
    const std::span<const Date> vol_dates{
        market.dates.data() + market.vol_index_offset(),
        market.volatility.size()};
    const LabelResult labels = direction_labels(market.volatility, vol_dates);
    std::filesystem::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/market.csv",
                    render_market_csv(cfg, market, labels));
}

std::vector<GridCell> run_correlate(const RunConfig& cfg) {
    const BaseData base = load_base(cfg);
    const auto scores =
        score_documents(base.documents.docs, base.lexicon, cfg.rules);
    const BucketResult buckets =
        bucket_by_day(base.documents.docs, base.calendar);
    const auto daily = build_daily_series(buckets.buckets, scores, cfg.rules);
    const MarketSeries market = build_market_series(
        base.prices, cfg.vol_window, cfg.vol_sample_divisor);
    const auto grid = correlation_grid(daily, market);
    std::filesystem::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/correlations.csv",
                    render_grid_csv(cfg, grid));
    write_text_file(cfg.output_dir + "/heatmap.txt", render_heatmap(cfg, grid));
    return grid;
}

std::vector<GrangerRow> run_granger(const RunConfig& cfg) {
    const BaseData base = load_base(cfg);
    const auto scores =
        score_documents(base.documents.docs, base.lexicon, cfg.rules);
    const BucketResult buckets =
        bucket_by_day(base.documents.docs, base.calendar);
    const auto daily = build_daily_series(buckets.buckets, scores, cfg.rules);
    const MarketSeries market = build_market_series(
        base.prices, cfg.vol_window, cfg.vol_sample_divisor);
    const auto rows = granger_rows(daily, market, cfg.granger_lags);
    std::filesystem::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/granger.csv",
                    render_granger_csv(cfg, rows));
    return rows;
}

PipelineResult run_pipeline(const RunConfig& cfg) {
    PipelineResult result;
    result.full_config_hash = config_hash(cfg, ConfigScope::full);
    std::filesystem::create_directories(cfg.output_dir);

    std::string stage = "corpus";
    try {
        const BaseData base = load_base(cfg);
        const std::unordered_set<std::string> stopwords =
            load_stopwords(cfg.stopwords_path);
        const auto& docs = base.documents.docs;

        stage = "score";
        const auto scores = score_documents(docs, base.lexicon, cfg.rules);
        write_stage(cfg, result.files, "score", "scores.csv",
                    render_scores_csv(cfg, docs, scores));

        stage = "aggregate";
        const BucketResult buckets = bucket_by_day(docs, base.calendar);
        const auto daily =
            build_daily_series(buckets.buckets, scores, cfg.rules);
        write_stage(cfg, result.files, "aggregate", "daily_sentiment.csv",
                    render_daily_csv(cfg, daily));

        stage = "market";
        const MarketSeries market = build_market_series(
            base.prices, cfg.vol_window, cfg.vol_sample_divisor);
        const std::span<const Date> vol_dates{
            market.dates.data() + market.vol_index_offset(),
            market.volatility.size()};
        const LabelResult labels =
            direction_labels(market.volatility, vol_dates);
        result.label_ties = labels.ties;
        write_stage(cfg, result.files, "market", "market.csv",
                    render_market_csv(cfg, market, labels));

        stage = "correlate";
        result.grid = correlation_grid(daily, market);
        write_stage(cfg, result.files, "correlate", "correlations.csv",
                    render_grid_csv(cfg, result.grid));
        write_stage(cfg, result.files, "correlate", "heatmap.txt",
                    render_heatmap(cfg, result.grid));

        stage = "granger";
        result.granger = granger_rows(daily, market, cfg.granger_lags);
        write_stage(cfg, result.files, "granger", "granger.csv",
                    render_granger_csv(cfg, result.granger));

        stage = "topics";
        // Time-ordered split: the topic model trains only on documents from
        // days strictly before the first test day.
        const std::size_t n_labeled = labels.labels.size();
        const auto n_train_days = static_cast<std::size_t>(std::floor(
            cfg.split_fraction * static_cast<double>(n_labeled)));
        if (n_train_days == 0 || n_train_days >= n_labeled) {
            throw std::runtime_error("not enough labeled days for a split");
        }
        const Date boundary = labels.labels[n_train_days].date;

        std::vector<Document> train_docs;
        for (const auto& bucket : buckets.buckets) {
            if (bucket.trading_day >= boundary) continue;
            for (const std::uint32_t idx : bucket.doc_indices) {
                train_docs.push_back(docs[idx]);
            }
        }
        const Vocabulary vocab =
            Vocabulary::build(train_docs, stopwords, cfg.vocab_min_df,
                              cfg.vocab_max_df_fraction);
        TrainOptions train_options;
        train_options.iterations = cfg.lda_iterations;
        train_options.seed = cfg.seed;
        const LdaModel model =
            gibbs_train(train_docs, vocab, cfg.lda_topics, cfg.lda_alpha,
                        cfg.lda_beta, train_options);
        {
            save_model(model, cfg.output_dir + "/topics_model.txt");
            std::string content =
                read_text_file(cfg.output_dir + "/topics_model.txt");
            content += meta_line(cfg, ConfigScope::topics);
            write_text_file(cfg.output_dir + "/topics_model.txt", content);
            result.files.push_back(StageFile{"topics", "topics_model.txt",
                                             sha256_hex(content)});
        }
        {
            nlohmann::ordered_json report;
            report["_meta"] = meta_json(cfg, ConfigScope::topics);
            report["topics"] = nlohmann::ordered_json::array();
            for (int k = 0; k < model.topic_count; ++k) {
                nlohmann::ordered_json entry;
                entry["topic_id"] = k;
                entry["top_words"] = nlohmann::ordered_json::array();
                for (const auto& [token, phi] : top_words(model, k, 10)) {
                    entry["top_words"].push_back({{"token", token},
                                                  {"phi", phi}});
                }
                report["topics"].push_back(entry);
            }
            write_stage(cfg, result.files, "topics", "topics.json",
                        report.dump(1) + "\n");
        }

        stage = "features";
        const InferParams infer{cfg.infer_burn_in, cfg.infer_samples};
        std::unordered_map<std::int64_t, const DayBucket*> bucket_by_date;
        for (const auto& bucket : buckets.buckets) {
            bucket_by_date.emplace(day_number(bucket.trading_day), &bucket);
        }
        std::vector<DayFeatureVector> features(n_labeled);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n_labeled);
             ++i) {
            const auto& label = labels.labels[static_cast<std::size_t>(i)];
            const DayBucket* bucket =
                bucket_by_date.at(day_number(label.date));
            features[static_cast<std::size_t>(i)] = day_feature_vector(
                model, *bucket, docs, cfg.feature_mode, infer, cfg.seed);
        }

        stage = "classify";
        const LabeledDataset dataset =
            make_dataset(features, labels.labels, cfg.split_fraction);
        const LogisticModel classifier =
            train_classifier(dataset, cfg.classifier);
        {
            save_classifier(classifier, cfg.lda_topics, cfg.feature_mode,
                            cfg.output_dir + "/classifier.txt");
            std::string content =
                read_text_file(cfg.output_dir + "/classifier.txt");
            content += meta_line(cfg, ConfigScope::full);
            write_text_file(cfg.output_dir + "/classifier.txt", content);
            result.files.push_back(StageFile{"classify", "classifier.txt",
                                             sha256_hex(content)});
        }

        stage = "evaluate";
        result.n_train = dataset.n_train;
        result.n_test = dataset.rows.size() - dataset.n_train;
        result.train_report = evaluate(classifier, dataset.train());
        result.test_report = evaluate(classifier, dataset.test());
        result.test_base_rate_up = base_rate_up(dataset.test());
        {
            nlohmann::ordered_json report;
            report["_meta"] = meta_json(cfg, ConfigScope::full);
            report["test"] = eval_block(result.test_report, result.n_test,
                                        result.test_base_rate_up);
            report["in_sample"] = eval_block(result.train_report,
                                             result.n_train,
                                             base_rate_up(dataset.train()));
            report["n_train"] = result.n_train;
            report["n_test"] = result.n_test;
            report["label_ties"] = result.label_ties;
            report["feature_mode"] = std::string(to_string(cfg.feature_mode));
            report["fallback_majority"] = classifier.fallback_majority;
            write_stage(cfg, result.files, "evaluate", "eval.json",
                        report.dump(1) + "\n");
        }

        stage = "manifest";
        {
            nlohmann::ordered_json manifest;
            manifest["_meta"] = meta_json(cfg, ConfigScope::full);
            manifest["config_hash"] = result.full_config_hash;
            nlohmann::ordered_json config;
            for (const auto& [key, value] :
                 config_keys(cfg, ConfigScope::full)) {
                config[key] = value;
            }
            manifest["config"] = config;
            nlohmann::ordered_json stages = nlohmann::ordered_json::array();
            for (const auto& file : result.files) {
                stages.push_back({{"stage", file.stage},
                                  {"file", file.filename},
                                  {"sha256", file.sha256}});
            }
            manifest["stages"] = stages;
            const std::string text = manifest.dump(1) + "\n";
            write_text_file(cfg.output_dir + "/manifest.json", text);
            result.files.push_back(
                StageFile{"manifest", "manifest.json", sha256_hex(text)});
        }
    } catch (const std::exception& e) {
        throw std::runtime_error("pipeline stage '" + stage +
                                 "' failed: " + e.what());
    }
    return result;
}

}  // namespace sentvol
