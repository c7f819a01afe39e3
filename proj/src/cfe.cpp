// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#include "carbonledger/cfe.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "carbonledger/errors.hpp"
#include "carbonledger/units.hpp"

namespace carbonledger {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw DomainError(message);
}

double parse_double_field(std::string_view field, const char* name, std::size_t line) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw LoadError(detail::cat("trace line ", line, ": field '", name,
                                    "' is not a number: '", field, "'"));
    }
    return value;
}

std::string double_to_string(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

void validate_trace(const HourlyTrace& trace) {
    for (std::size_t i = 0; i < trace.hours.size(); ++i) {
        const TraceHour& h = trace.hours[i];
        const std::string at = detail::cat("trace hour ", format_utc_hour(h.timestamp));
        require(h.consumption_kwh >= 0, at + ": consumption_kwh must be >= 0");
        require(h.grid_intensity_kg_per_kwh >= 0, at + ": grid intensity must be >= 0");
        require(h.grid_cfe_fraction >= 0 && h.grid_cfe_fraction <= 1,
                at + ": grid_cfe_fraction must be in [0, 1]");
        require(h.contracted_cfe_kwh >= 0, at + ": contracted_cfe_kwh must be >= 0");
        if (i > 0) {
            require(h.timestamp - trace.hours[i - 1].timestamp == 1,
                    at + ": timestamps must increase in one-hour steps");
        }
    }
}

HourMatch match_hour(double consumption_kwh, double grid_intensity_kg_per_kwh,
                     double grid_cfe_fraction, double contracted_cfe_kwh) {
    require(consumption_kwh >= 0, "match_hour: consumption_kwh must be >= 0");
    require(grid_intensity_kg_per_kwh >= 0, "match_hour: grid intensity must be >= 0");
    require(grid_cfe_fraction >= 0 && grid_cfe_fraction <= 1,
            "match_hour: grid_cfe_fraction must be in [0, 1]");
    require(contracted_cfe_kwh >= 0, "match_hour: contracted_cfe_kwh must be >= 0");

    const double cfe_supply = contracted_cfe_kwh + consumption_kwh * grid_cfe_fraction;
    HourMatch m;
    m.matched_kwh = std::min(consumption_kwh, cfe_supply);
    m.residual_kwh = consumption_kwh - m.matched_kwh;
    m.emissions_kg = m.residual_kwh * grid_intensity_kg_per_kwh;
    return m;
}

MatchResult match_trace(const HourlyTrace& trace) {
    require(!trace.hours.empty(), "match_trace: trace is empty");
    validate_trace(trace);

    MatchResult result;
    result.per_hour.reserve(trace.hours.size());
    double total_consumption = 0.0;
    double total_matched = 0.0;
    double net_kg = 0.0;
    double gross_kg = 0.0;
    for (const TraceHour& h : trace.hours) {
        const HourMatch m = match_hour(h.consumption_kwh, h.grid_intensity_kg_per_kwh,
                                       h.grid_cfe_fraction, h.contracted_cfe_kwh);
        total_consumption += h.consumption_kwh;
        total_matched += m.matched_kwh;
        net_kg += m.emissions_kg;
        gross_kg += h.consumption_kwh * h.grid_intensity_kg_per_kwh;
        result.per_hour.push_back(m);
    }
    result.net_tco2e = units::kg_to_tonnes(net_kg);
    result.gross_tco2e = units::kg_to_tonnes(gross_kg);
    // A trace that consumed nothing has nothing unmatched. The ratio is
    // divided before scaling so a fully matched trace reports exactly 100.
    result.cfe_percent =
        total_consumption > 0 ? 100.0 * (total_matched / total_consumption) : 100.0;
    result.net_intensity_kg_per_kwh =
        total_consumption > 0 ? net_kg / total_consumption : 0.0;
    return result;
}

MatchResult match_from_profile(double total_kwh, const DatacenterProfile& profile) {
    require(total_kwh >= 0, "match_from_profile: total_kwh must be >= 0");
    MatchResult result;
    result.net_tco2e = total_kwh * profile.net_intensity_kg_per_kwh / units::kKgPerTonne;
    result.gross_tco2e = total_kwh * profile.gross_intensity_kg_per_kwh / units::kKgPerTonne;
    result.net_intensity_kg_per_kwh = profile.net_intensity_kg_per_kwh;
    if (profile.cfe_fraction) {
        result.cfe_percent = 100.0 * *profile.cfe_fraction;
    } else if (profile.gross_intensity_kg_per_kwh > 0) {
        result.cfe_percent = 100.0 * (1.0 - profile.net_intensity_kg_per_kwh /
                                                profile.gross_intensity_kg_per_kwh);
    } else {
        result.cfe_percent = 100.0;
    }
    return result;
}

HourlyTrace synthesize_trace(double total_kwh, int hours,
                             std::span<const double> intensity_profile,
                             std::span<const double> cfe_profile,
                             std::span<const double> contracted_profile, UtcHour start) {
    require(total_kwh >= 0, "synthesize_trace: total_kwh must be >= 0");
    require(hours > 0, "synthesize_trace: hours must be > 0");
    const auto n = static_cast<std::size_t>(hours);
    require(intensity_profile.size() == n && cfe_profile.size() == n &&
                contracted_profile.size() == n,
            "synthesize_trace: profile lengths must equal the hour count");

    HourlyTrace trace;
    trace.hours.reserve(n);
    const double per_hour = total_kwh / hours;
    for (std::size_t i = 0; i < n; ++i) {
        trace.hours.push_back({start + static_cast<std::int64_t>(i), per_hour,
                               intensity_profile[i], cfe_profile[i], contracted_profile[i]});
    }
    validate_trace(trace);
    return trace;
}

HourlyTrace parse_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw LoadError("trace file is empty");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceCsvHeader) {
        throw LoadError(detail::cat("trace file: unexpected header '", line, "'"));
    }

    HourlyTrace trace;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (fields.size() != 5) {
            throw LoadError(detail::cat("trace line ", line_number, ": expected 5 fields, got ",
                                        fields.size()));
        }
        TraceHour h;
        h.timestamp = parse_utc_hour(fields[0]);
        h.consumption_kwh = parse_double_field(fields[1], "consumption_kwh", line_number);
        h.grid_intensity_kg_per_kwh =
            parse_double_field(fields[2], "grid_intensity_kg_per_kwh", line_number);
        h.grid_cfe_fraction = parse_double_field(fields[3], "grid_cfe_fraction", line_number);
        h.contracted_cfe_kwh =
            parse_double_field(fields[4], "contracted_cfe_kwh", line_number);
        trace.hours.push_back(h);
    }
    validate_trace(trace);
    return trace;
}

HourlyTrace parse_trace_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw LoadError(detail::cat("cannot open trace file '", path, "'"));
    }
    return parse_trace_csv(in);
}

std::string trace_to_csv(const HourlyTrace& trace) {
    std::ostringstream out;
    out << kTraceCsvHeader << '\n';
    for (const TraceHour& h : trace.hours) {
        out << format_utc_hour(h.timestamp) << ',' << double_to_string(h.consumption_kwh)
            << ',' << double_to_string(h.grid_intensity_kg_per_kwh) << ','
            << double_to_string(h.grid_cfe_fraction) << ','
            << double_to_string(h.contracted_cfe_kwh) << '\n';
    }
    return out.str();
}

} // namespace carbonledger
