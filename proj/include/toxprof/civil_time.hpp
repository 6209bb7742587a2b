#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace toxprof {

/// Calendar date-time in UTC, second resolution.
struct CivilDateTime {
    int year = 1970;
    unsigned month = 1;  // 1..12
    unsigned day = 1;    // 1..31
    unsigned hour = 0;
    unsigned minute = 0;
    unsigned second = 0;
};

struct YearMonth {
    int year = 1970;
    unsigned month = 1;
    auto operator<=>(const YearMonth&) const = default;
};

/// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
std::int64_t days_from_civil(int year, unsigned month, unsigned day);

CivilDateTime civil_from_unix(std::int64_t unix_seconds);

/// Parses exactly "YYYY-MM-DDTHH:MM:SSZ"; rejects anything else,
/// including invalid calendar dates.
std::optional<std::int64_t> parse_iso8601_utc(std::string_view text);

std::string format_iso8601_utc(std::int64_t unix_seconds);

/// ISO weekday, Monday = 0 .. Sunday = 6.
int weekday_monday0(std::int64_t unix_seconds);

/// UTC hour of day, 0..23.
unsigned hour_of_day(std::int64_t unix_seconds);

YearMonth year_month_of(std::int64_t unix_seconds);

std::string to_string(const YearMonth& ym);  // "2019-05"

}  // namespace toxprof
