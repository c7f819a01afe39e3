// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#include "carbonledger/timeutil.hpp"

#include <array>
#include <cstdio>

#include "carbonledger/errors.hpp"

namespace carbonledger {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// public-domain civil-date algorithm).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool is_leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(std::int64_t y, unsigned m) {
    static constexpr std::array<unsigned, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                         31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[m - 1];
}

bool all_digits(std::string_view s) {
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return !s.empty();
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

[[noreturn]] void bad_timestamp(std::string_view text) {
    throw LoadError(detail::cat("invalid hourly UTC timestamp '", text,
                                "' (expected YYYY-MM-DDTHH:00:00Z)"));
}

} // namespace

UtcHour parse_utc_hour(std::string_view text) {
    // Accepted: "YYYY-MM-DDTHH:00Z" and "YYYY-MM-DDTHH:00:00Z".
    if (text.size() != 17 && text.size() != 20) bad_timestamp(text);
    if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
        text.back() != 'Z')
        bad_timestamp(text);

    const std::string_view year = text.substr(0, 4);
    const std::string_view month = text.substr(5, 2);
    const std::string_view day = text.substr(8, 2);
    const std::string_view hour = text.substr(11, 2);
    const std::string_view minute = text.substr(14, 2);
    std::string_view second = "00";
    if (text.size() == 20) {
        if (text[16] != ':') bad_timestamp(text);
        second = text.substr(17, 2);
    }
    if (!all_digits(year) || !all_digits(month) || !all_digits(day) || !all_digits(hour) ||
        !all_digits(minute) || !all_digits(second))
        bad_timestamp(text);
    if (minute != "00" || second != "00") bad_timestamp(text);

    const int y = to_int(year);
    const unsigned m = static_cast<unsigned>(to_int(month));
    const unsigned d = static_cast<unsigned>(to_int(day));
    const int h = to_int(hour);
    if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m) || h > 23) bad_timestamp(text);

    return UtcHour{days_from_civil(y, m, d) * 24 + h};
}

std::string format_utc_hour(UtcHour hour) {
    std::int64_t days = hour.value / 24;
    std::int64_t h = hour.value % 24;
    if (h < 0) {
        h += 24;
        days -= 1;
    }
    std::int64_t y = 0;
    unsigned m = 0, d = 0;
    civil_from_days(days, y, m, d);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:00:00Z",
                  static_cast<long long>(y), m, d, static_cast<long long>(h));
    return buf;
}

} // namespace carbonledger
