#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "sentvol/aggregate.hpp"
#include "sentvol/market.hpp"

namespace sentvol {

struct CorrelationResult {
    double r = 0.0;
    double p_value = 1.0;
    int n = 0;
    int lag = 0;  // 0 = same day, 1 = sentiment day t vs market day t+1
};

// Pearson correlation with a two-sided p-value from the exact t distribution
// (via the regularized incomplete beta). Requires equal lengths, n >= 3, and
// nonzero variance in both series. |r| = 1 yields p = 0.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

enum class SentimentDim { negative, positive, neutral, aggregate };
enum class MarketTarget { returns, volatility };

std::string_view to_string(SentimentDim d);
std::string_view to_string(MarketTarget t);
double sentiment_value(const DailySentiment& day, SentimentDim dim);

// Pairs sentiment_t with target_{t+lag} over the dates where both sides are
// defined (inner join on trading days, no interpolation), then delegates to
// pearson. lag must be 0 or 1.
CorrelationResult lagged_correlation(std::span<const DailySentiment> sentiment,
                                     const MarketSeries& market,
                                     SentimentDim dim, MarketTarget target,
                                     int lag);

struct OlsFit {
    std::vector<double> coefficients;  // intercept, own lags, then cross lags
    double rss = 0.0;
    int t_eff = 0;  // observations used = T - k
    int lag_order = 0;
};

// OLS of y_t on an intercept and y_{t-1..t-k}, optionally plus x_{t-1..t-k}.
// Normal equations with a Cholesky factorization; falls back to column-pivoted
// Householder QR when the Gram matrix is numerically semidefinite. Throws on
// a singular design ("collinear lags").
OlsFit ols_lags(std::span<const double> y, std::span<const double> x, int k,
                bool include_x);

struct GrangerResult {
    int lag = 0;
    double f_stat = 0.0;
    double p_value = 1.0;
};

// Tests whether lags of x improve the forecast of y over y's own lags.
// F = ((RSS_r - RSS_u)/k) / (RSS_u/(T_eff - 2k - 1)), p from F(k, df_denom).
// Swap the arguments for the reverse causal direction.
GrangerResult granger_test(std::span<const double> x,
                           std::span<const double> y, int k);

}  // namespace sentvol
