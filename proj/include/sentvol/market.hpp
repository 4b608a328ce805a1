#pragma once

#include <span>
#include <vector>

#include "sentvol/corpus.hpp"
#include "sentvol/sentiment.hpp"

namespace sentvol {

inline constexpr double kTradingDaysPerYear = 252.0;

// Daily log return r_t = ln(close_t / close_{t-1}); output[i] is the return
// at date index i + 1. Throws on fewer than two closes or non-positive input.
std::vector<double> log_returns(std::span<const double> closes);

// Trailing-window annualized volatility: for each window of `window`
// consecutive returns, sqrt(mean squared deviation) * sqrt(252). The divisor
// is 1/N (population) unless sample_divisor selects 1/(N-1). output[j] covers
// returns [j, j + window); with returns starting at date index 1 this places
// output[j] at date index j + window.
std::vector<double> rolling_volatility(std::span<const double> returns,
                                       int window, bool sample_divisor = false,
                                       Exec exec = Exec::parallel);

struct DirectionLabel {
    Date date;
    bool up = false;  // volatility rises from this day to the next
};

struct LabelResult {
    std::vector<DirectionLabel> labels;  // one per day t with vol_t, vol_{t+1}
    int ties = 0;                        // vol_{t+1} == vol_t (labelled DOWN)
};

LabelResult direction_labels(std::span<const double> volatility,
                             std::span<const Date> vol_dates);

// Dated closes with aligned derived series.
struct MarketSeries {
    std::vector<Date> dates;
    std::vector<double> closes;
    std::vector<double> returns;     // at date index i + 1
    std::vector<double> volatility;  // at date index j + window
    int window = 10;
    bool sample_divisor = false;

    std::size_t return_index_offset() const { return 1; }
    std::size_t vol_index_offset() const {
        return static_cast<std::size_t>(window);
    }
};

MarketSeries build_market_series(const PriceSeries& prices, int window,
                                 bool sample_divisor = false,
                                 Exec exec = Exec::parallel);

}  // namespace sentvol
