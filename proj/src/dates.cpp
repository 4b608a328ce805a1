#include "sentvol/dates.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace sentvol {

namespace {

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> lengths{31, 28, 31, 30, 31, 30,
                                                 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[static_cast<std::size_t>(month - 1)];
}

int parse_int_exact(std::string_view s) {
    int value = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    }
    return value;
}

}  // namespace

bool is_valid_date(const Date& d) {
    return d.month >= 1 && d.month <= 12 && d.day >= 1 &&
           d.day <= days_in_month(d.year, d.month);
}

std::int64_t day_number(const Date& d) {
    // Howard Hinnant's days_from_civil.
    const int y = d.year - (d.month <= 2);
    const int era_base = y >= 0 ? y : y - 399;
    const std::int64_t era = era_base / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>(
        (153 * (d.month + (d.month > 2 ? -3 : 9)) + 2) / 5 + d.day - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date date_from_day_number(std::int64_t days) {
    const std::int64_t z = days + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : static_cast<unsigned>(-9));
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                static_cast<int>(d)};
}

Date parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
        throw std::invalid_argument("bad date: '" + std::string(s) + "'");
    }
    Date d{parse_int_exact(s.substr(0, 4)), parse_int_exact(s.substr(5, 2)),
           parse_int_exact(s.substr(8, 2))};
    if (!is_valid_date(d)) {
        throw std::invalid_argument("bad date: '" + std::string(s) + "'");
    }
    return d;
}

std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

std::int64_t parse_timestamp_utc(std::string_view s) {
    // Layout: date "T" HH:MM:SS [.fraction] (Z | +HH:MM | +HHMM | +HH)
    if (s.size() < 20 || (s[10] != 'T' && s[10] != ' ')) {
        throw std::invalid_argument("bad timestamp: '" + std::string(s) + "'");
    }
    const Date date = parse_date(s.substr(0, 10));
    if (s[13] != ':' || s[16] != ':') {
        throw std::invalid_argument("bad timestamp: '" + std::string(s) + "'");
    }
    const int hour = parse_int_exact(s.substr(11, 2));
    const int minute = parse_int_exact(s.substr(14, 2));
    const int second = parse_int_exact(s.substr(17, 2));
    if (hour > 23 || minute > 59 || second > 60 || hour < 0 || minute < 0 ||
        second < 0) {
        throw std::invalid_argument("bad time of day: '" + std::string(s) + "'");
    }
    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            ++pos;
        }
    }
    if (pos >= s.size()) {
        throw std::invalid_argument("timestamp missing offset: '" +
                                    std::string(s) + "'");
    }
    std::int64_t offset_seconds = 0;
    const char c = s[pos];
    if (c == 'Z' || c == 'z') {
        if (pos + 1 != s.size()) {
            throw std::invalid_argument("trailing junk in timestamp: '" +
                                        std::string(s) + "'");
        }
    } else if (c == '+' || c == '-') {
        std::string_view off = s.substr(pos + 1);
        int oh = 0;
        int om = 0;
        if (off.size() == 5 && off[2] == ':') {
            oh = parse_int_exact(off.substr(0, 2));
            om = parse_int_exact(off.substr(3, 2));
        } else if (off.size() == 4) {
            oh = parse_int_exact(off.substr(0, 2));
            om = parse_int_exact(off.substr(2, 2));
        } else if (off.size() == 2) {
            oh = parse_int_exact(off);
        } else {
            throw std::invalid_argument("bad timestamp offset: '" +
                                        std::string(s) + "'");
        }
        if (oh > 18 || om > 59) {
            throw std::invalid_argument("bad timestamp offset: '" +
                                        std::string(s) + "'");
        }
        offset_seconds = (static_cast<std::int64_t>(oh) * 60 + om) * 60;
        if (c == '-') offset_seconds = -offset_seconds;
    } else {
        throw std::invalid_argument("bad timestamp offset: '" + std::string(s) +
                                    "'");
    }
    const std::int64_t local =
        day_number(date) * 86400 + hour * 3600 + minute * 60 + second;
    return local - offset_seconds;
}

Date utc_date_of(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    if (epoch_seconds < 0 && epoch_seconds % 86400 != 0) --days;
    return date_from_day_number(days);
}

}  // namespace sentvol
