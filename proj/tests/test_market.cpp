#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "sentvol/market.hpp"
#include "sentvol/rng.hpp"

using namespace sentvol;

namespace {

// independent two-pass evaluation in extended precision
double brute_force_vol(std::span<const double> window, bool sample_divisor) {
    long double mean = 0.0L;
    for (const double r : window) mean += r;
    mean /= static_cast<long double>(window.size());
    long double ss = 0.0L;
    for (const double r : window) {
        const long double d = static_cast<long double>(r) - mean;
        ss += d * d;
    }
    const long double divisor = sample_divisor
                                    ? static_cast<long double>(window.size() - 1)
                                    : static_cast<long double>(window.size());
    return static_cast<double>(std::sqrt(ss / divisor) *
                               std::sqrt(252.0L));
}

}  // namespace

TEST_CASE("log returns on pinned closes") {
    const std::vector<double> flat{100.0, 100.0};
    CHECK(log_returns(flat) == std::vector<double>{0.0});

    const std::vector<double> up{100.0, 105.0};
    CHECK(log_returns(up)[0] ==
          doctest::Approx(0.048790164169432003).epsilon(1e-12));

    const std::vector<double> round_trip{100.0, 105.0, 100.0};
    const auto r = log_returns(round_trip);
    CHECK(r[0] == doctest::Approx(-r[1]).epsilon(1e-15));

    CHECK_THROWS_AS(log_returns(std::vector<double>{100.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(log_returns(std::vector<double>{100.0, -1.0}),
                    std::invalid_argument);
}

TEST_CASE("telescoping sum of log returns") {
    Rng rng(17);
    std::vector<double> closes{250.0};
    for (int i = 0; i < 500; ++i) {
        closes.push_back(closes.back() * std::exp(0.02 * rng.next_normal()));
    }
    const auto returns = log_returns(closes);
    const double sum = std::accumulate(returns.begin(), returns.end(), 0.0);
    CHECK(sum == doctest::Approx(std::log(closes.back() / closes.front()))
                     .epsilon(1e-12));
}

TEST_CASE("rolling volatility pinned cases") {
    // constant returns -> zero deviation
    const std::vector<double> constant(10, 0.004);
    for (const double v : rolling_volatility(constant, 5)) CHECK(v == 0.0);

    // {+0.01, -0.01} with N=2: population sd 0.01, annualized by sqrt(252)
    const std::vector<double> pair{0.01, -0.01};
    const auto vol = rolling_volatility(pair, 2);
    REQUIRE(vol.size() == 1);
    CHECK(vol[0] == doctest::Approx(0.15874507866387544).epsilon(1e-12));

    CHECK_THROWS_AS(rolling_volatility(pair, 3), std::invalid_argument);
    CHECK_THROWS_AS(rolling_volatility(pair, 1), std::invalid_argument);
}

TEST_CASE("rolling volatility equals two-pass brute force on random windows") {
    Rng rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 50 + rng.next_below(400);
        const int window = 2 + static_cast<int>(rng.next_below(20));
        std::vector<double> returns(n);
        for (double& r : returns) {
            // include a large common level to stress cancellation handling
            r = 0.05 * rng.next_normal() + (trial % 2 == 0 ? 0.0 : 3.0);
        }
        const bool sample = trial % 2 == 1;
        const auto vol = rolling_volatility(returns, window, sample);
        REQUIRE(vol.size() == n - static_cast<std::size_t>(window) + 1);
        for (std::size_t j = 0; j < vol.size(); ++j) {
            const std::span<const double> win{returns.data() + j,
                                              static_cast<std::size_t>(window)};
            CHECK(std::fabs(vol[j] - brute_force_vol(win, sample)) < 1e-12);
        }
    }
}

TEST_CASE("volatility is homogeneous in the returns") {
    Rng rng(5);
    std::vector<double> returns(40);
    for (double& r : returns) r = 0.01 * rng.next_normal();
    std::vector<double> scaled(returns);
    for (double& r : scaled) r *= 2.5;
    const auto base = rolling_volatility(returns, 10);
    const auto big = rolling_volatility(scaled, 10);
    for (std::size_t j = 0; j < base.size(); ++j) {
        CHECK(big[j] == doctest::Approx(2.5 * base[j]).epsilon(1e-12));
    }
}

TEST_CASE("multiplicative close shifts leave returns and volatility alone") {
    Rng rng(29);
    std::vector<double> closes{100.0};
    for (int i = 0; i < 60; ++i) {
        closes.push_back(closes.back() * std::exp(0.01 * rng.next_normal()));
    }
    std::vector<double> shifted(closes);
    for (double& c : shifted) c *= 42.0;
    const auto r1 = log_returns(closes);
    const auto r2 = log_returns(shifted);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r2[i] == doctest::Approx(r1[i]).epsilon(1e-12));
    }
}

TEST_CASE("direction labels follow the next-day comparison with ties DOWN") {
    const std::vector<Date> dates{Date{2019, 8, 5}, Date{2019, 8, 6},
                                  Date{2019, 8, 7}};
    SUBCASE("up move") {
        const std::vector<double> vols{0.10, 0.12};
        const auto result = direction_labels(vols, {dates.data(), 2});
        REQUIRE(result.labels.size() == 1);
        CHECK(result.labels[0].up);
        CHECK(result.ties == 0);
    }
    SUBCASE("tie labels DOWN and is counted") {
        const std::vector<double> vols{0.12, 0.12};
        const auto result = direction_labels(vols, {dates.data(), 2});
        CHECK_FALSE(result.labels[0].up);
        CHECK(result.ties == 1);
    }
    SUBCASE("three points yield exactly two labels") {
        const std::vector<double> vols{0.1, 0.2, 0.15};
        const auto result = direction_labels(vols, dates);
        REQUIRE(result.labels.size() == 2);
        CHECK(result.labels[0].up);
        CHECK_FALSE(result.labels[1].up);
    }
}

TEST_CASE("market series aligns returns and volatility to dates") {
    PriceSeries prices;
    for (int i = 0; i < 20; ++i) {
        prices.bars.push_back(PriceBar{
            date_from_day_number(18000 + i), 100.0 + i});
    }
    const MarketSeries series = build_market_series(prices, 5);
    CHECK(series.returns.size() == 19);
    CHECK(series.volatility.size() == 15);
    CHECK(series.vol_index_offset() == 5);
    // volatility[j] covers returns [j, j+5): last window ends at date 19
    CHECK(series.dates.size() == 20);
}
