#include "sentvol/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"
#include "sentvol/io_util.hpp"

namespace sentvol {

std::optional<Source> source_from_string(std::string_view s) {
    if (s == "headline") return Source::headline;
    if (s == "tweet") return Source::tweet;
    if (s == "story") return Source::story;
    return std::nullopt;
}

std::string_view to_string(Source s) {
    switch (s) {
        case Source::headline: return "headline";
        case Source::tweet: return "tweet";
        case Source::story: return "story";
    }
    return "headline";
}

void LoadReport::warn(std::string message) {
    if (warnings.size() < kMaxWarnings) warnings.push_back(std::move(message));
}

DocumentSet load_documents(const std::string& path,
                           std::optional<Source> source_filter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open documents file: " + path);

    DocumentSet out;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++out.report.total_lines;

        const auto fail = [&](const char* why) {
            ++out.report.malformed;
            out.report.warn("line " + std::to_string(line_no) + ": " + why);
        };

        const nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            fail("not a JSON object");
            continue;
        }
        if (!rec.contains("id") || !rec["id"].is_string() ||
            !rec.contains("ts") || !rec["ts"].is_string() ||
            !rec.contains("text") || !rec["text"].is_string() ||
            !rec.contains("source") || !rec["source"].is_string()) {
            fail("missing or mistyped field (need id/ts/text/source strings)");
            continue;
        }
        Document doc;
        doc.id = rec["id"].get<std::string>();
        doc.text = rec["text"].get<std::string>();
        if (trim(doc.text).empty()) {
            fail("empty text");
            continue;
        }
        const auto source = source_from_string(rec["source"].get<std::string>());
        if (!source) {
            fail("unknown source");
            continue;
        }
        doc.source = *source;
        try {
            doc.ts_utc = parse_timestamp_utc(rec["ts"].get<std::string>());
        } catch (const std::invalid_argument&) {
            fail("unparseable timestamp");
            continue;
        }
        doc.utc_date = utc_date_of(doc.ts_utc);
        if (!seen_ids.insert(doc.id).second) {
            fail("duplicate id");
            continue;
        }
        if (source_filter && doc.source != *source_filter) continue;
        out.docs.push_back(std::move(doc));
    }

    if (out.report.total_lines > 0 &&
        out.report.malformed * 2 > out.report.total_lines) {
        throw std::runtime_error(
            "documents file mostly malformed: " +
            std::to_string(out.report.malformed) + " of " +
            std::to_string(out.report.total_lines) + " lines rejected");
    }
    return out;
}

PriceSeries load_prices(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open prices file: " + path);

    PriceSeries out;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (trim(line) != "date,close") {
                throw std::runtime_error(path +
                                         ": expected header \"date,close\"");
            }
            header_seen = true;
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 2) {
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": expected 2 columns");
        }
        PriceBar bar;
        bar.date = parse_date(trim(cols[0]));
        const std::string close_text = trim(cols[1]);
        char* end = nullptr;
        bar.close = std::strtod(close_text.c_str(), &end);
        if (end != close_text.c_str() + close_text.size() || close_text.empty()) {
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": bad close value '" + close_text + "'");
        }
        if (!(bar.close > 0.0)) {
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": non-positive close " + close_text);
        }
        out.bars.push_back(bar);
    }
    if (!header_seen) throw std::runtime_error(path + ": empty prices file");

    if (!std::is_sorted(out.bars.begin(), out.bars.end(),
                        [](const PriceBar& a, const PriceBar& b) {
                            return a.date < b.date;
                        })) {
        std::stable_sort(out.bars.begin(), out.bars.end(),
                         [](const PriceBar& a, const PriceBar& b) {
                             return a.date < b.date;
                         });
        out.was_unsorted = true;
    }
    for (std::size_t i = 1; i < out.bars.size(); ++i) {
        if (out.bars[i].date == out.bars[i - 1].date) {
            throw std::runtime_error(path + ": duplicate date " +
                                     to_string(out.bars[i].date));
        }
    }
    return out;
}

TradingCalendar TradingCalendar::from_prices(const PriceSeries& prices) {
    std::vector<Date> days;
    days.reserve(prices.bars.size());
    for (const auto& bar : prices.bars) days.push_back(bar.date);
    return from_days(std::move(days));
}

TradingCalendar TradingCalendar::from_days(std::vector<Date> days) {
    if (days.empty()) throw std::invalid_argument("empty trading calendar");
    if (!std::is_sorted(days.begin(), days.end())) {
        throw std::invalid_argument("trading calendar must be sorted");
    }
    TradingCalendar cal;
    cal.days_ = std::move(days);
    return cal;
}

std::optional<Date> TradingCalendar::roll_forward(const Date& d) const {
    const auto it = std::lower_bound(days_.begin(), days_.end(), d);
    if (it == days_.end()) return std::nullopt;
    return *it;
}

bool TradingCalendar::contains(const Date& d) const {
    return std::binary_search(days_.begin(), days_.end(), d);
}

std::optional<std::size_t> TradingCalendar::index_of(const Date& d) const {
    const auto it = std::lower_bound(days_.begin(), days_.end(), d);
    if (it == days_.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - days_.begin());
}

BucketResult bucket_by_day(std::span<const Document> docs,
                           const TradingCalendar& cal) {
    BucketResult out;
    out.buckets.resize(cal.size());
    for (std::size_t i = 0; i < cal.size(); ++i) {
        out.buckets[i].trading_day = cal.days()[i];
    }
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto day = cal.roll_forward(docs[i].utc_date);
        if (!day) {
            ++out.excluded;
            continue;
        }
        const auto idx = cal.index_of(*day);
        out.buckets[*idx].doc_indices.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

}  // namespace sentvol
