#include "sentvol/market.hpp"

#include <cmath>
#include <stdexcept>

namespace sentvol {

std::vector<double> log_returns(std::span<const double> closes) {
    if (closes.size() < 2) {
        throw std::invalid_argument("log_returns needs at least two closes");
    }
    std::vector<double> returns(closes.size() - 1);
    for (std::size_t i = 0; i + 1 < closes.size(); ++i) {
        if (!(closes[i] > 0.0) || !(closes[i + 1] > 0.0)) {
            throw std::invalid_argument("log_returns: non-positive close");
        }
        returns[i] = std::log(closes[i + 1] / closes[i]);
    }
    return returns;
}

std::vector<double> rolling_volatility(std::span<const double> returns,
                                       int window, bool sample_divisor,
                                       Exec exec) {
    if (window < 2) {
        throw std::invalid_argument("volatility window must be >= 2");
    }
    const auto w = static_cast<std::size_t>(window);
    if (returns.size() < w) {
        throw std::invalid_argument("volatility window larger than series");
    }
    const std::size_t count = returns.size() - w + 1;
    std::vector<double> vol(count);

    const auto one_window = [&](std::size_t j) {
        double mean = 0.0;
        for (std::size_t t = j; t < j + w; ++t) mean += returns[t];
        mean /= static_cast<double>(window);
        double ss = 0.0;
        for (std::size_t t = j; t < j + w; ++t) {
            const double d = returns[t] - mean;
            ss += d * d;
        }
        const double divisor =
            sample_divisor ? static_cast<double>(window - 1)
                           : static_cast<double>(window);
        return std::sqrt(ss / divisor) * std::sqrt(kTradingDaysPerYear);
    };

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(count); ++j) {
            vol[static_cast<std::size_t>(j)] =
                one_window(static_cast<std::size_t>(j));
        }
    } else {
        for (std::size_t j = 0; j < count; ++j) vol[j] = one_window(j);
    }
    return vol;
}

LabelResult direction_labels(std::span<const double> volatility,
                             std::span<const Date> vol_dates) {
    if (volatility.size() < 2) {
        throw std::invalid_argument("direction_labels needs >= 2 points");
    }
    if (volatility.size() != vol_dates.size()) {
        throw std::invalid_argument("direction_labels: date/series mismatch");
    }
    LabelResult out;
    out.labels.reserve(volatility.size() - 1);
    for (std::size_t t = 0; t + 1 < volatility.size(); ++t) {
        const bool up = volatility[t + 1] > volatility[t];
        if (volatility[t + 1] == volatility[t]) ++out.ties;
        out.labels.push_back(DirectionLabel{vol_dates[t], up});
    }
    return out;
}

MarketSeries build_market_series(const PriceSeries& prices, int window,
                                 bool sample_divisor, Exec exec) {
    MarketSeries series;
    series.window = window;
    series.sample_divisor = sample_divisor;
    series.dates.reserve(prices.bars.size());
    series.closes.reserve(prices.bars.size());
    for (const auto& bar : prices.bars) {
        series.dates.push_back(bar.date);
        series.closes.push_back(bar.close);
    }
    series.returns = log_returns(series.closes);
    series.volatility =
        rolling_volatility(series.returns, window, sample_divisor, exec);
    return series;
}

}  // namespace sentvol
