#include <cmath>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "sentvol/rng.hpp"
#include "sentvol/stats.hpp"

using namespace sentvol;

namespace {

nlohmann::json load_json(const std::string& name) {
    std::ifstream in(test_data_path(name));
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("pearson handles exact linear relations") {
    const std::vector<double> x{1, 2, 3};
    const std::vector<double> up{2, 4, 6};
    const std::vector<double> down{6, 4, 2};
    const CorrelationResult perfect = pearson(x, up);
    CHECK(perfect.r == 1.0);
    CHECK(perfect.p_value == 0.0);
    CHECK(pearson(x, down).r == -1.0);
}

TEST_CASE("pearson input validation") {
    const std::vector<double> x{1, 2, 3};
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2},
                            std::vector<double>{3, 4}),
                    std::invalid_argument);
    CHECK_THROWS_WITH_AS(pearson(std::vector<double>{5, 5, 5}, x),
                         doctest::Contains("undefined correlation"),
                         std::invalid_argument);
}

TEST_CASE("pearson matches the pinned reference fixtures to 1e-9") {
    const auto fixtures = load_json("pearson_fixtures.json");
    REQUIRE(fixtures.size() == 10);
    for (const auto& fx : fixtures) {
        const std::vector<double> x = fx["x"].get<std::vector<double>>();
        const std::vector<double> y = fx["y"].get<std::vector<double>>();
        const CorrelationResult got = pearson(x, y);
        CHECK(std::fabs(got.r - fx["r"].get<double>()) < 1e-9);
        CHECK(std::fabs(got.p_value - fx["p"].get<double>()) < 1e-9);
    }
}

TEST_CASE("pearson symmetry and affine invariance") {
    Rng rng(301);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + rng.next_below(40);
        std::vector<double> x(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.next_normal();
            y[i] = 0.4 * x[i] + rng.next_normal();
        }
        const CorrelationResult xy = pearson(x, y);
        const CorrelationResult yx = pearson(y, x);
        CHECK(xy.r == yx.r);  // exact symmetry
        CHECK(xy.p_value == yx.p_value);

        const double a = 0.5 + rng.next_double() * 3.0;
        const double b = rng.next_normal() * 10.0;
        std::vector<double> mapped(x);
        for (double& v : mapped) v = a * v + b;
        CHECK(pearson(mapped, y).r == doctest::Approx(xy.r).epsilon(1e-12));
        for (double& v : mapped) v = -v;
        CHECK(pearson(mapped, y).r == doctest::Approx(-xy.r).epsilon(1e-12));
    }
}

TEST_CASE("granger matches the pinned reference fixtures to 1e-6") {
    const auto fixtures = load_json("granger_fixtures.json");
    REQUIRE(fixtures.size() == 10);
    for (const auto& fx : fixtures) {
        const std::vector<double> x = fx["x"].get<std::vector<double>>();
        const std::vector<double> y = fx["y"].get<std::vector<double>>();
        const int k = fx["k"].get<int>();
        const GrangerResult got = granger_test(x, y, k);
        CHECK(std::fabs(got.f_stat - fx["F"].get<double>()) < 1e-6);
        CHECK(std::fabs(got.p_value - fx["p"].get<double>()) < 1e-6);
    }
}

TEST_CASE("granger nesting: unrestricted RSS never exceeds restricted") {
    Rng rng(88);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t t_len = 30 + rng.next_below(60);
        std::vector<double> x(t_len);
        std::vector<double> y(t_len);
        for (std::size_t t = 0; t < t_len; ++t) {
            x[t] = rng.next_normal();
            y[t] = rng.next_normal();
        }
        const int k = 1 + static_cast<int>(rng.next_below(3));
        const OlsFit restricted = ols_lags(y, x, k, false);
        const OlsFit unrestricted = ols_lags(y, x, k, true);
        CHECK(unrestricted.rss <= restricted.rss + 1e-9);
        CHECK(restricted.t_eff == static_cast<int>(t_len) - k);
    }
}

TEST_CASE("granger on an exact shifted copy is a causation limit") {
    std::vector<double> x(60);
    Rng rng(3);
    for (double& v : x) v = rng.next_normal();
    std::vector<double> y(60, 0.0);
    for (std::size_t t = 1; t < y.size(); ++t) y[t] = x[t - 1];
    const GrangerResult result = granger_test(x, y, 1);
    CHECK(result.f_stat > 1e6);
    CHECK(result.p_value < 1e-12);
}

TEST_CASE("granger error paths") {
    std::vector<double> x(30);
    std::vector<double> y(30);
    Rng rng(9);
    for (std::size_t i = 0; i < 30; ++i) {
        x[i] = rng.next_normal();
        y[i] = rng.next_normal();
    }
    CHECK_THROWS_AS(granger_test(x, std::vector<double>{1, 2, 3}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        granger_test(std::vector<double>{1, 2, 3, 4},
                     std::vector<double>{1, 2, 3, 4}, 2),
        std::invalid_argument);
    // collinear design: x is an exact copy of y
    CHECK_THROWS_WITH_AS(granger_test(y, y, 1),
                         doctest::Contains("collinear"), std::runtime_error);
}

TEST_CASE("lagged correlation joins on trading dates") {
    PriceSeries prices;
    for (int i = 0; i < 30; ++i) {
        prices.bars.push_back(
            PriceBar{date_from_day_number(18200 + i),
                     100.0 * std::exp(0.01 * i + 0.004 * std::sin(1.7 * i))});
    }
    const MarketSeries market = build_market_series(prices, 5);

    std::vector<DailySentiment> daily(30);
    for (int i = 0; i < 30; ++i) {
        daily[static_cast<std::size_t>(i)].trading_day =
            date_from_day_number(18200 + i);
        daily[static_cast<std::size_t>(i)].mean_pos = 0.1 * i;
        daily[static_cast<std::size_t>(i)].sentd = 0.01 * i;
    }

    SUBCASE("lag 0 join covers every day with a defined target") {
        const CorrelationResult c = lagged_correlation(
            daily, market, SentimentDim::positive, MarketTarget::volatility, 0);
        CHECK(c.n == static_cast<int>(market.volatility.size()));
        CHECK(c.lag == 0);
    }
    SUBCASE("lag 0 against an identical series gives r = 1") {
        std::vector<DailySentiment> mirror(daily);
        for (std::size_t j = 0; j < market.volatility.size(); ++j) {
            mirror[j + market.vol_index_offset()].sentd = market.volatility[j];
        }
        const CorrelationResult c = lagged_correlation(
            mirror, market, SentimentDim::aggregate, MarketTarget::volatility,
            0);
        CHECK(c.r == 1.0);
        CHECK(c.p_value == 0.0);
    }
    SUBCASE("lag 1 drops the last pair") {
        const CorrelationResult c0 = lagged_correlation(
            daily, market, SentimentDim::positive, MarketTarget::volatility, 0);
        const CorrelationResult c1 = lagged_correlation(
            daily, market, SentimentDim::positive, MarketTarget::volatility, 1);
        CHECK(c1.n == c0.n);  // lag shifts the window start, size is bounded
        CHECK(c1.lag == 1);
    }
    SUBCASE("insufficient overlap throws") {
        const std::vector<DailySentiment> two(daily.begin(), daily.begin() + 2);
        CHECK_THROWS_WITH_AS(
            lagged_correlation(two, market, SentimentDim::positive,
                               MarketTarget::returns, 0),
            doctest::Contains("insufficient overlap"), std::invalid_argument);
    }
}

TEST_CASE("planted lag-1 anticorrelation is recovered") {
    // target_{t+1} = -sentiment_t + tiny noise
    Rng rng(55);
    const int n = 120;
    PriceSeries prices;
    std::vector<DailySentiment> daily(static_cast<std::size_t>(n));
    std::vector<double> sentiment(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        sentiment[static_cast<std::size_t>(i)] =
            0.5 + 0.4 * std::sin(0.37 * i) + 0.01 * rng.next_normal();
    }
    // build closes whose returns are +/- m with magnitude tracking sentiment,
    // window 2 so vol_{t} is driven by recent magnitudes
    std::vector<double> closes{1000.0};
    for (int t = 1; t < n; ++t) {
        const double magnitude =
            0.02 * (1.2 - sentiment[static_cast<std::size_t>(t - 1)]);
        const double sign = t % 2 == 0 ? 1.0 : -1.0;
        closes.push_back(closes.back() * std::exp(sign * magnitude));
    }
    for (int i = 0; i < n; ++i) {
        const Date date = date_from_day_number(18300 + i);
        prices.bars.push_back(PriceBar{date, closes[static_cast<std::size_t>(i)]});
        daily[static_cast<std::size_t>(i)].trading_day = date;
        daily[static_cast<std::size_t>(i)].mean_pos =
            sentiment[static_cast<std::size_t>(i)];
    }
    const MarketSeries market = build_market_series(prices, 2);
    const CorrelationResult c = lagged_correlation(
        daily, market, SentimentDim::positive, MarketTarget::volatility, 1);
    CHECK(c.r < -0.8);
    CHECK(c.p_value < 0.05);
}
