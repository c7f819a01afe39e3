// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "carbonledger/domain.hpp"
#include "carbonledger/timeutil.hpp"

namespace carbonledger {

/// One hour of consumption against the local grid, with the clean supply
/// available that hour: the grid's inherent carbon-free share plus energy
/// contracted for that same hour on the same grid.
struct TraceHour {
    UtcHour timestamp;
    double consumption_kwh = 0.0;
    double grid_intensity_kg_per_kwh = 0.0;
    double grid_cfe_fraction = 0.0;
    double contracted_cfe_kwh = 0.0;

    friend bool operator==(const TraceHour&, const TraceHour&) = default;
};

struct HourlyTrace {
    std::vector<TraceHour> hours;

    friend bool operator==(const HourlyTrace&, const HourlyTrace&) = default;
};

/// Throws DomainError unless timestamps are strictly increasing at exactly
/// one-hour steps and every numeric field is within range.
void validate_trace(const HourlyTrace& trace);

struct HourMatch {
    double residual_kwh = 0.0;
    double emissions_kg = 0.0;
    double matched_kwh = 0.0;
};

/// Matches one hour of consumption against that hour's clean supply.
/// Supply is contracted energy plus the grid-inherent carbon-free share of
/// consumption; surplus beyond consumption earns no credit. The accounting
/// resets every hour, so surplus never carries over.
HourMatch match_hour(double consumption_kwh, double grid_intensity_kg_per_kwh,
                     double grid_cfe_fraction, double contracted_cfe_kwh);

struct MatchResult {
    double net_tco2e = 0.0;
    double gross_tco2e = 0.0;
    double cfe_percent = 0.0;
    double net_intensity_kg_per_kwh = 0.0;
    std::vector<HourMatch> per_hour;
};

/// Folds match_hour over a whole trace. Totals are accumulated in trace
/// order, so the output is deterministic.
MatchResult match_trace(const HourlyTrace& trace);

/// The no-trace path: a site-period profile's intensities are taken as
/// pre-computed matching results for the given consumption. CFE share comes
/// from the profile when recorded, otherwise from the gross-to-net drop.
MatchResult match_from_profile(double total_kwh, const DatacenterProfile& profile);

/// Builds a trace spreading total_kwh uniformly over `hours` hours starting
/// at `start`, attaching the given per-hour profiles.
HourlyTrace synthesize_trace(double total_kwh, int hours,
                             std::span<const double> intensity_profile,
                             std::span<const double> cfe_profile,
                             std::span<const double> contracted_profile,
                             UtcHour start = UtcHour{438288}); // 2020-01-01T00:00:00Z

inline constexpr const char* kTraceCsvHeader =
    "timestamp,consumption_kwh,grid_intensity_kg_per_kwh,grid_cfe_fraction,"
    "contracted_cfe_kwh";

HourlyTrace parse_trace_csv(std::istream& in);
HourlyTrace parse_trace_csv_file(const std::string& path);
std::string trace_to_csv(const HourlyTrace& trace);

} // namespace carbonledger
