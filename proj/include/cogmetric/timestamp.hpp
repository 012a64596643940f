#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "cogmetric/errors.hpp"

namespace cogmetric {

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
// Howard Hinnant's days_from_civil.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    std::int64_t year;
    unsigned month;
    unsigned day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);          // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);          // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                               // [0, 11]
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;                       // [1, 31]
    const unsigned m = mp + (mp < 10 ? 3 : -9);                            // [1, 12]
    return {y + (m <= 2), m, d};
}

constexpr bool is_leap_year(std::int64_t y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

constexpr unsigned days_in_month(std::int64_t y, unsigned m) {
    constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap_year(y)) return 29;
    return lengths[m - 1];
}

} // namespace detail

// A UTC instant with nanosecond resolution. Parses RFC 3339 timestamps
// (offsets are converted to UTC) and formats the canonical "Z" form.
class Timestamp {
public:
    Timestamp() = default;

    static Timestamp from_unix(std::int64_t seconds, std::uint32_t nanos = 0) {
        Timestamp t;
        t.seconds_ = seconds;
        t.nanos_ = nanos;
        return t;
    }

    // Throws FormatError on anything that is not a valid RFC 3339 timestamp.
    static Timestamp parse(std::string_view text) {
        const auto fail = [&] {
            throw FormatError("invalid RFC 3339 timestamp '" + std::string(text) + "'");
        };
        std::size_t i = 0;
        const auto digits = [&](int n) -> std::int64_t {
            std::int64_t value = 0;
            for (int k = 0; k < n; ++k, ++i) {
                if (i >= text.size() || text[i] < '0' || text[i] > '9') fail();
                value = value * 10 + (text[i] - '0');
            }
            return value;
        };
        const auto expect = [&](char c) {
            if (i >= text.size() || text[i] != c) fail();
            ++i;
        };

        const std::int64_t year = digits(4);
        expect('-');
        const std::int64_t month = digits(2);
        expect('-');
        const std::int64_t day = digits(2);
        if (i >= text.size() || (text[i] != 'T' && text[i] != 't' && text[i] != ' ')) fail();
        ++i;
        const std::int64_t hour = digits(2);
        expect(':');
        const std::int64_t minute = digits(2);
        expect(':');
        const std::int64_t second = digits(2);

        if (month < 1 || month > 12) fail();
        if (day < 1 || day > detail::days_in_month(year, static_cast<unsigned>(month))) fail();
        if (hour > 23 || minute > 59 || second > 60) fail();

        std::uint32_t nanos = 0;
        if (i < text.size() && text[i] == '.') {
            ++i;
            std::uint64_t frac = 0;
            int count = 0;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
                if (count < 9) {
                    frac = frac * 10 + static_cast<std::uint64_t>(text[i] - '0');
                    ++count;
                }
                ++i;
            }
            if (count == 0) fail();
            while (count < 9) {
                frac *= 10;
                ++count;
            }
            nanos = static_cast<std::uint32_t>(frac);
        }

        std::int64_t offset_seconds = 0;
        if (i >= text.size()) fail();
        if (text[i] == 'Z' || text[i] == 'z') {
            ++i;
        } else if (text[i] == '+' || text[i] == '-') {
            const bool negative = text[i] == '-';
            ++i;
            const std::int64_t oh = digits(2);
            expect(':');
            const std::int64_t om = digits(2);
            if (oh > 23 || om > 59) fail();
            offset_seconds = (oh * 3600 + om * 60) * (negative ? -1 : 1);
        } else {
            fail();
        }
        if (i != text.size()) fail();

        const std::int64_t days =
            detail::days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
        Timestamp ts;
        ts.seconds_ = days * 86400 + hour * 3600 + minute * 60 + second - offset_seconds;
        ts.nanos_ = nanos;
        return ts;
    }

    // Canonical UTC form, e.g. "2024-09-18T00:00:00Z". Fractional seconds are
    // printed only when nonzero, with trailing zeros trimmed.
    std::string to_string() const {
        std::int64_t days = seconds_ / 86400;
        std::int64_t rem = seconds_ % 86400;
        if (rem < 0) {
            rem += 86400;
            --days;
        }
        const auto date = detail::civil_from_days(days);
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                      static_cast<long long>(date.year), date.month, date.day,
                      static_cast<long long>(rem / 3600),
                      static_cast<long long>((rem / 60) % 60),
                      static_cast<long long>(rem % 60));
        std::string out(buf);
        if (nanos_ != 0) {
            char frac[16];
            std::snprintf(frac, sizeof(frac), ".%09u", nanos_);
            std::string f(frac);
            while (f.back() == '0') f.pop_back();
            out += f;
        }
        out += 'Z';
        return out;
    }

    std::int64_t unix_seconds() const { return seconds_; }
    std::uint32_t nanoseconds() const { return nanos_; }

    auto operator<=>(const Timestamp&) const = default;

private:
    std::int64_t seconds_ = 0;
    std::uint32_t nanos_ = 0;
};

} // namespace cogmetric
