#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sentvol/corpus.hpp"

namespace sentvol {

// Deterministic synthetic corpus + price series with two planted effects:
//  - documents on day t draw their topic vocabulary from a "turbulence" or a
//    "calm" word block according to the realized direction of volatility
//    from t to t+1, so day-t topic mixtures predict the next-day move;
//  - the share of documents carrying positive-sentiment phrasing on day t
//    falls linearly with the (normalized) volatility level at t+1, planting
//    a strong negative correlation between positive sentiment and next-day
//    volatility.
// Weekends receive a reduced document flow that rolls forward to Monday.
struct SynthConfig {
    int n_trading_days = 160;
    int docs_per_day = 28;
    int vol_window = 10;
    std::uint64_t seed = 42;
};

struct SynthData {
    std::vector<Document> documents;  // in timestamp order
    PriceSeries prices;
};

SynthData generate_synthetic(const SynthConfig& config);

// Writes documents.jsonl and prices.csv under dir (created if needed).
void write_synthetic(const SynthData& data, const std::string& dir);

}  // namespace sentvol
