#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sentvol/dates.hpp"

namespace sentvol {

enum class Source { headline, tweet, story };

std::optional<Source> source_from_string(std::string_view s);
std::string_view to_string(Source s);

// One timestamped text item. utc_date is derived from ts_utc once at load.
struct Document {
    std::string id;
    std::int64_t ts_utc = 0;
    Date utc_date;
    std::string text;
    Source source = Source::headline;
};

struct LoadReport {
    std::size_t total_lines = 0;
    std::size_t malformed = 0;
    std::vector<std::string> warnings;  // capped at kMaxWarnings
    static constexpr std::size_t kMaxWarnings = 20;

    void warn(std::string message);
};

struct DocumentSet {
    std::vector<Document> docs;
    LoadReport report;
};

// UTF-8 line-delimited JSON records with fields id/ts/text/source.
// Malformed lines are skipped with a warning; more than half malformed is
// fatal. Duplicate ids and empty-after-trim texts count as malformed.
DocumentSet load_documents(const std::string& path,
                           std::optional<Source> source_filter = {});

struct PriceBar {
    Date date;
    double close = 0.0;
};

struct PriceSeries {
    std::vector<PriceBar> bars;  // strictly increasing dates
    bool was_unsorted = false;   // input needed sorting (warning condition)
};

// CSV with header "date,close". Duplicate dates and non-positive closes are
// fatal; unsorted input is sorted with a warning flag. Lines starting with
// '#' are skipped.
PriceSeries load_prices(const std::string& path);

// Ordered set of trading days, taken from the price series.
class TradingCalendar {
  public:
    static TradingCalendar from_prices(const PriceSeries& prices);
    static TradingCalendar from_days(std::vector<Date> days);

    // Smallest trading day >= d, or nullopt when d is past the last one.
    std::optional<Date> roll_forward(const Date& d) const;
    bool contains(const Date& d) const;
    std::optional<std::size_t> index_of(const Date& d) const;

    const std::vector<Date>& days() const { return days_; }
    std::size_t size() const { return days_.size(); }

  private:
    std::vector<Date> days_;
};

struct DayBucket {
    Date trading_day;
    std::vector<std::uint32_t> doc_indices;  // into the source document span
};

struct BucketResult {
    std::vector<DayBucket> buckets;  // one per calendar day, in order
    std::size_t excluded = 0;        // documents dated past the last trading day
};

// Maps each document to the first trading day >= its UTC date (weekend and
// holiday content rolls forward). Documents past the final trading day are
// excluded and counted.
BucketResult bucket_by_day(std::span<const Document> docs,
                           const TradingCalendar& cal);

}  // namespace sentvol
