#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <string_view>

namespace sentvol {

// Calendar date, proleptic Gregorian. Valid range is whatever fits in int.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;
};

bool is_valid_date(const Date& d);

// Days since 1970-01-01 (civil day algorithm, no timezone).
std::int64_t day_number(const Date& d);
Date date_from_day_number(std::int64_t days);

// "YYYY-MM-DD"; throws std::invalid_argument on malformed input.
Date parse_date(std::string_view s);
std::string to_string(const Date& d);

// ISO-8601 timestamp with offset ("2019-08-02T09:15:00Z", "...+01:00",
// "...+0100"; fractional seconds accepted and truncated). Returns UTC epoch
// seconds; throws std::invalid_argument on malformed input.
std::int64_t parse_timestamp_utc(std::string_view s);

// UTC calendar date of an epoch-seconds instant.
Date utc_date_of(std::int64_t epoch_seconds);

}  // namespace sentvol
