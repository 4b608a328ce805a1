// The OpenMP kernels must produce bit-identical results to their serial
// reference implementations for any thread count: every output element is
// computed independently with a fixed floating-point sequence.

#include "doctest.h"
#include "helpers.hpp"
#include "sentvol/aggregate.hpp"
#include "sentvol/market.hpp"
#include "sentvol/rng.hpp"
#include "sentvol/synth.hpp"
#include "sentvol/topics.hpp"

using namespace sentvol;

namespace {

const SynthData& shared_synth() {
    static const SynthData data = [] {
        SynthConfig config;
        config.n_trading_days = 60;
        config.docs_per_day = 10;
        config.seed = 321;
        return generate_synthetic(config);
    }();
    return data;
}

}  // namespace

TEST_CASE("document scoring: parallel equals serial bitwise") {
    const SynthData& data = shared_synth();
    const Lexicon lex = Lexicon::load(repo_data_path("vader_lexicon.txt"));
    const RuleConfig cfg;
    const auto serial = score_documents(data.documents, lex, cfg, Exec::serial);
    const auto parallel =
        score_documents(data.documents, lex, cfg, Exec::parallel);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].neg == parallel[i].neg);
        CHECK(serial[i].neu == parallel[i].neu);
        CHECK(serial[i].pos == parallel[i].pos);
        CHECK(serial[i].compound == parallel[i].compound);
    }
}

TEST_CASE("rolling volatility: parallel equals serial bitwise") {
    Rng rng(4096);
    std::vector<double> returns(5000);
    for (double& r : returns) r = 0.01 * rng.next_normal();
    for (const int window : {2, 7, 21}) {
        const auto serial =
            rolling_volatility(returns, window, false, Exec::serial);
        const auto parallel =
            rolling_volatility(returns, window, false, Exec::parallel);
        CHECK(serial == parallel);
    }
}

TEST_CASE("daily aggregation: parallel equals serial bitwise") {
    const SynthData& data = shared_synth();
    const Lexicon lex = Lexicon::load(repo_data_path("vader_lexicon.txt"));
    const RuleConfig cfg;
    const auto scores = score_documents(data.documents, lex, cfg, Exec::serial);
    const TradingCalendar cal = TradingCalendar::from_prices(data.prices);
    const BucketResult buckets = bucket_by_day(data.documents, cal);
    const auto serial =
        build_daily_series(buckets.buckets, scores, cfg, Exec::serial);
    const auto parallel =
        build_daily_series(buckets.buckets, scores, cfg, Exec::parallel);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].mean_compound == parallel[i].mean_compound);
        CHECK(serial[i].sentd == parallel[i].sentd);
        CHECK(serial[i].n_docs == parallel[i].n_docs);
    }
}

TEST_CASE("topic fold-in: parallel equals serial bitwise") {
    const SynthData& data = shared_synth();
    const std::span<const Document> docs{data.documents.data(), 400};
    const Vocabulary vocab = Vocabulary::build(docs, {}, 2, 0.9);
    TrainOptions options;
    options.iterations = 60;
    options.seed = 5;
    const LdaModel model = gibbs_train(docs, vocab, 4, 0.0, 0.01, options);
    const InferParams params{15, 8};
    const auto serial = infer_thetas(model, docs, params, 11, Exec::serial);
    const auto parallel = infer_thetas(model, docs, params, 11, Exec::parallel);
    CHECK(serial == parallel);
}
