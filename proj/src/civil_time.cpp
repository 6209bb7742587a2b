#include "toxprof/civil_time.hpp"

#include <array>
#include <cstdio>

namespace toxprof {

namespace {

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(int y, unsigned m) {
    static constexpr std::array<unsigned, 12> kDays{31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return kDays[m - 1];
}

}  // namespace

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDateTime civil_from_unix(std::int64_t t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    const std::int64_t z = days + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);

    CivilDateTime out;
    out.year = static_cast<int>(y + (m <= 2));
    out.month = m;
    out.day = d;
    out.hour = static_cast<unsigned>(rem / 3600);
    out.minute = static_cast<unsigned>((rem / 60) % 60);
    out.second = static_cast<unsigned>(rem % 60);
    return out;
}

std::optional<std::int64_t> parse_iso8601_utc(std::string_view s) {
    // YYYY-MM-DDTHH:MM:SSZ
    if (s.size() != 20) return std::nullopt;
    if (s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
        s[16] != ':' || s[19] != 'Z') {
        return std::nullopt;
    }
    auto digits = [&](std::size_t pos, std::size_t len, unsigned& out) {
        out = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (s[i] < '0' || s[i] > '9') return false;
            out = out * 10 + static_cast<unsigned>(s[i] - '0');
        }
        return true;
    };
    unsigned year, month, day, hour, minute, second;
    if (!digits(0, 4, year) || !digits(5, 2, month) || !digits(8, 2, day) ||
        !digits(11, 2, hour) || !digits(14, 2, minute) || !digits(17, 2, second)) {
        return std::nullopt;
    }
    if (month < 1 || month > 12) return std::nullopt;
    if (day < 1 || day > days_in_month(static_cast<int>(year), month)) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

    return days_from_civil(static_cast<int>(year), month, day) * 86400 +
           hour * 3600 + minute * 60 + second;
}

std::string format_iso8601_utc(std::int64_t t) {
    const CivilDateTime c = civil_from_unix(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02u:%02u:%02uZ", c.year,
                  c.month, c.day, c.hour, c.minute, c.second);
    return buf;
}

int weekday_monday0(std::int64_t t) {
    std::int64_t days = t / 86400;
    if (t % 86400 < 0) --days;
    // 1970-01-01 was a Thursday (index 3 with Monday = 0).
    std::int64_t wd = (days + 3) % 7;
    if (wd < 0) wd += 7;
    return static_cast<int>(wd);
}

unsigned hour_of_day(std::int64_t t) {
    return civil_from_unix(t).hour;
}

YearMonth year_month_of(std::int64_t t) {
    const CivilDateTime c = civil_from_unix(t);
    return YearMonth{c.year, c.month};
}

std::string to_string(const YearMonth& ym) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u", ym.year, ym.month);
    return buf;
}

}  // namespace toxprof
