#include "sentvol/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "sentvol/io_util.hpp"
#include "sentvol/market.hpp"
#include "sentvol/rng.hpp"

namespace sentvol {

namespace {

const char* const kTurbulenceWords[] = {
    "turbulence", "whipsaw", "swings",   "margin",      "hedging",
    "futures",    "gap",     "spike",    "churn",       "intraday",
    "spread",     "velocity", "unwind",  "rotation",    "positioning"};

const char* const kCalmWords[] = {
    "consolidation", "range",   "drift",    "anchor",    "ballast",
    "coupon",        "treasury", "bond",    "yield",     "income",
    "custody",       "settlement", "carry", "duration",  "rebalance"};

const char* const kNoiseWords[] = {
    "market",  "shares",  "company",  "quarterly", "earnings",
    "update",  "outlook", "sector",   "london",    "exchange",
    "board",   "meeting", "statement", "figures",  "analysts",
    "forecast", "guidance", "index",   "trading",  "session"};

const char* const kPositivePhrases[] = {
    "investors cheer strong gains",
    "profits soar on upbeat outlook",
    "optimistic traders welcome solid growth",
    "confidence improves after impressive rally",
    "steady recovery delights shareholders"};

const char* const kNegativePhrases[] = {
    "fears of losses weigh on desks",
    "grim warning rattles investors",
    "worries over weak demand grow",
    "gloomy analysts dread further declines"};

bool is_weekend(const Date& d) {
    // 1970-01-01 was a Thursday; weekday 2/3 below are Sat/Sun.
    const std::int64_t wd = ((day_number(d) % 7) + 7) % 7;
    return wd == 2 || wd == 3;
}

template <std::size_t N>
const char* pick(const char* const (&words)[N], Rng& rng) {
    return words[rng.next_below(N)];
}

std::string make_text(bool has_label, bool label_up, double p_positive,
                      Rng& rng) {
    std::ostringstream text;
    const char* const* block = kNoiseWords;
    std::size_t block_size = std::size(kNoiseWords);
    if (has_label && rng.next_double() < 0.82) {
        if (label_up) {
            block = kTurbulenceWords;
            block_size = std::size(kTurbulenceWords);
        } else {
            block = kCalmWords;
            block_size = std::size(kCalmWords);
        }
    }
    const std::size_t n_topic_words = 5 + rng.next_below(4);
    for (std::size_t i = 0; i < n_topic_words; ++i) {
        if (i > 0) text << ' ';
        text << block[rng.next_below(block_size)];
    }
    text << ' ' << pick(kNoiseWords, rng);

    if (rng.next_double() < p_positive) {
        text << ' ' << pick(kPositivePhrases, rng);
    }
    if (rng.next_double() < 0.12) {
        text << ' ' << pick(kNegativePhrases, rng);
    }
    return text.str();
}

}  // namespace

SynthData generate_synthetic(const SynthConfig& config) {
    SynthData out;
    Rng rng(config.seed);

    // Weekday trading calendar starting Monday 2019-01-07.
    std::vector<Date> trading_days;
    std::int64_t dn = day_number(Date{2019, 1, 7});
    while (static_cast<int>(trading_days.size()) < config.n_trading_days) {
        const Date d = date_from_day_number(dn);
        if (!is_weekend(d)) trading_days.push_back(d);
        ++dn;
    }

    // Slow sinusoidal volatility regime gives both label classes in runs.
    std::vector<double> closes{7000.0};
    for (int t = 1; t < config.n_trading_days; ++t) {
        const double sigma =
            0.008 * (1.0 + 0.75 * std::sin(2.0 * std::numbers::pi * t / 45.0));
        const double r = sigma * rng.next_normal();
        closes.push_back(closes.back() * std::exp(r));
    }
    out.prices.bars.reserve(trading_days.size());
    for (std::size_t i = 0; i < trading_days.size(); ++i) {
        out.prices.bars.push_back(PriceBar{trading_days[i], closes[i]});
    }

    const MarketSeries market =
        build_market_series(out.prices, config.vol_window, false, Exec::serial);
    const std::size_t vol_offset = market.vol_index_offset();

    double vol_min = market.volatility.front();
    double vol_max = market.volatility.front();
    for (const double v : market.volatility) {
        vol_min = std::min(vol_min, v);
        vol_max = std::max(vol_max, v);
    }
    const double vol_span = std::max(vol_max - vol_min, 1e-12);

    const auto vol_at_index = [&](std::size_t date_index) -> double {
        return market.volatility[date_index - vol_offset];
    };
    const auto has_vol = [&](std::size_t date_index) {
        return date_index >= vol_offset && date_index < trading_days.size();
    };

    const TradingCalendar cal = TradingCalendar::from_prices(out.prices);
    long doc_counter = 0;

    for (std::int64_t day = day_number(trading_days.front());
         day <= day_number(trading_days.back()); ++day) {
        const Date date = date_from_day_number(day);
        const auto rolled = cal.roll_forward(date);
        if (!rolled) continue;
        const std::size_t t = *cal.index_of(*rolled);

        const bool label_known = has_vol(t) && has_vol(t + 1);
        const bool label_up = label_known && vol_at_index(t + 1) > vol_at_index(t);
        double p_positive = 0.4;
        if (has_vol(t + 1)) {
            const double norm = (vol_at_index(t + 1) - vol_min) / vol_span;
            p_positive = std::clamp(0.78 - 0.58 * norm, 0.05, 0.95);
        }

        int n_docs = config.docs_per_day;
        if (is_weekend(date)) n_docs = std::max(1, config.docs_per_day / 4);
        n_docs += static_cast<int>(rng.next_below(5)) - 2;

        for (int i = 0; i < n_docs; ++i) {
            Document doc;
            char id[32];
            std::snprintf(id, sizeof id, "synth-%07ld", doc_counter++);
            doc.id = id;
            const std::int64_t seconds_of_day =
                8 * 3600 +
                static_cast<std::int64_t>(rng.next_below(12 * 3600));
            doc.ts_utc = day * 86400 + seconds_of_day;
            doc.utc_date = date;
            doc.text = make_text(label_known, label_up, p_positive, rng);
            const std::uint64_t source_pick = rng.next_below(10);
            doc.source = source_pick < 5
                             ? Source::tweet
                             : (source_pick < 8 ? Source::headline
                                                : Source::story);
            out.documents.push_back(std::move(doc));
        }
    }
    return out;
}

void write_synthetic(const SynthData& data, const std::string& dir) {
    std::filesystem::create_directories(dir);

    std::ostringstream docs;
    for (const auto& doc : data.documents) {
        nlohmann::ordered_json rec;
        rec["id"] = doc.id;
        char ts[40];
        const std::int64_t sec = doc.ts_utc % 86400;
        std::snprintf(ts, sizeof ts, "%sT%02d:%02d:%02dZ",
                      to_string(doc.utc_date).c_str(),
                      static_cast<int>(sec / 3600),
                      static_cast<int>((sec / 60) % 60),
                      static_cast<int>(sec % 60));
        rec["ts"] = ts;
        rec["text"] = doc.text;
        rec["source"] = std::string(to_string(doc.source));
        docs << rec.dump() << "\n";
    }
    write_text_file(dir + "/documents.jsonl", docs.str());

    std::ostringstream prices;
    prices << "date,close\n";
    for (const auto& bar : data.prices.bars) {
        prices << to_string(bar.date) << "," << format_double(bar.close)
               << "\n";
    }
    write_text_file(dir + "/prices.csv", prices.str());
}

}  // namespace sentvol
