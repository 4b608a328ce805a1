// Timings for the OpenMP kernels against their serial reference paths:
// document scoring, rolling volatility, and topic fold-in inference.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sentvol/aggregate.hpp"
#include "sentvol/market.hpp"
#include "sentvol/pipeline.hpp"
#include "sentvol/rng.hpp"
#include "sentvol/synth.hpp"
#include "sentvol/topics.hpp"

using namespace sentvol;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

template <typename F>
double time_call(F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return seconds_since(start);
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-22s serial %8.3f s   parallel %8.3f s   speedup %5.2fx\n",
                name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    int scale = argc > 1 ? std::atoi(argv[1]) : 1;
    if (scale < 1) scale = 1;
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both paths run serially\n");
#endif

    SynthConfig config;
    config.n_trading_days = 120;
    config.docs_per_day = 60 * scale;
    config.seed = 7;
    const SynthData data = generate_synthetic(config);
    std::printf("corpus: %zu documents, %zu trading days\n",
                data.documents.size(), data.prices.bars.size());

    Lexicon lexicon = Lexicon::load("data/vader_lexicon.txt");
    const RuleConfig rules;

    std::vector<SentimentScores> serial_scores;
    std::vector<SentimentScores> parallel_scores;
    const double score_serial = time_call([&] {
        serial_scores =
            score_documents(data.documents, lexicon, rules, Exec::serial);
    });
    const double score_parallel = time_call([&] {
        parallel_scores =
            score_documents(data.documents, lexicon, rules, Exec::parallel);
    });
    bool identical = serial_scores.size() == parallel_scores.size();
    for (std::size_t i = 0; identical && i < serial_scores.size(); ++i) {
        identical = serial_scores[i].compound == parallel_scores[i].compound;
    }
    report("score_documents", score_serial, score_parallel);
    std::printf("  parallel output bit-identical to serial: %s\n",
                identical ? "yes" : "NO");

    // long synthetic return series for the volatility kernel
    Rng rng(11);
    std::vector<double> returns(2'000'000 * static_cast<std::size_t>(scale));
    for (double& r : returns) r = 0.01 * rng.next_normal();
    std::vector<double> vol_serial;
    std::vector<double> vol_parallel;
    const double vol_s = time_call([&] {
        vol_serial = rolling_volatility(returns, 20, false, Exec::serial);
    });
    const double vol_p = time_call([&] {
        vol_parallel = rolling_volatility(returns, 20, false, Exec::parallel);
    });
    identical = vol_serial == vol_parallel;
    report("rolling_volatility", vol_s, vol_p);
    std::printf("  parallel output bit-identical to serial: %s\n",
                identical ? "yes" : "NO");

    const auto stopwords = load_stopwords("data/stopwords_en.txt");
    const Vocabulary vocab = Vocabulary::build(data.documents, stopwords, 2, 0.6);
    TrainOptions train_options;
    train_options.iterations = 150;
    train_options.seed = 7;
    const LdaModel model =
        gibbs_train(data.documents, vocab, 15, 0.0, 0.01, train_options);

    const InferParams infer{20, 10};
    std::vector<std::vector<double>> thetas_serial;
    std::vector<std::vector<double>> thetas_parallel;
    const double infer_s = time_call([&] {
        thetas_serial =
            infer_thetas(model, data.documents, infer, 7, Exec::serial);
    });
    const double infer_p = time_call([&] {
        thetas_parallel =
            infer_thetas(model, data.documents, infer, 7, Exec::parallel);
    });
    identical = thetas_serial == thetas_parallel;
    report("infer_thetas", infer_s, infer_p);
    std::printf("  parallel output bit-identical to serial: %s\n",
                identical ? "yes" : "NO");
    return 0;
}
