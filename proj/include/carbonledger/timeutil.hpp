// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace carbonledger {

/// A UTC timestamp truncated to the hour, stored as whole hours since
/// 1970-01-01T00:00:00Z. Cheap to compare and to step by whole hours.
struct UtcHour {
    std::int64_t value = 0;

    friend auto operator<=>(const UtcHour&, const UtcHour&) = default;
    friend UtcHour operator+(UtcHour h, std::int64_t hours) { return UtcHour{h.value + hours}; }
    friend UtcHour operator-(UtcHour h, std::int64_t hours) { return UtcHour{h.value - hours}; }
    friend std::int64_t operator-(UtcHour a, UtcHour b) { return a.value - b.value; }
};

/// Parses "YYYY-MM-DDTHH:00:00Z" (seconds optional). Minutes and seconds
/// must be zero. Throws LoadError on anything else.
UtcHour parse_utc_hour(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:00:00Z".
std::string format_utc_hour(UtcHour hour);

} // namespace carbonledger
