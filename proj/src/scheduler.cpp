// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#include "carbonledger/scheduler.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

#include "carbonledger/errors.hpp"
#include "carbonledger/units.hpp"

namespace carbonledger {

namespace {

double effective_pue(const JobSpec& job, const std::string& datacenter_id,
                     const Registry* registry) {
    if (job.pue_override) return *job.pue_override;
    if (registry != nullptr && registry->datacenters().count(datacenter_id) == 1) {
        return registry->datacenter(datacenter_id).pue;
    }
    return 1.0;
}

bool eligible(const JobSpec& job, const std::string& datacenter_id) {
    if (job.eligible_datacenters.empty()) return true;
    return std::find(job.eligible_datacenters.begin(), job.eligible_datacenters.end(),
                     datacenter_id) != job.eligible_datacenters.end();
}

// (net, start, id) ordering; lower is better.
bool better(const Candidate& a, const Candidate& b) {
    return std::tie(a.net_tco2e, a.start.value, a.datacenter_id) <
           std::tie(b.net_tco2e, b.start.value, b.datacenter_id);
}

} // namespace

void validate_job(const JobSpec& job) {
    if (job.chip_count < 1) throw DomainError("job: chip_count must be >= 1");
    if (job.avg_power_w <= 0) throw DomainError("job: avg_power_w must be > 0");
    if (job.pue_override && *job.pue_override < 1.0) {
        throw DomainError("job: pue_override must be >= 1.0");
    }
    if (job.duration_hours < 1) throw DomainError("job: duration_hours must be >= 1");
    if (job.deadline - job.earliest_start < job.duration_hours) {
        throw DomainError(detail::cat("job '", job.id, "': window [",
                                      format_utc_hour(job.earliest_start), ", ",
                                      format_utc_hour(job.deadline),
                                      ") is shorter than duration_hours=", job.duration_hours));
    }
}

CandidateEmissions candidate_emissions(const JobSpec& job, const std::string& datacenter_id,
                                       UtcHour start, const TraceMap& traces,
                                       const Registry* registry) {
    validate_job(job);
    if (start < job.earliest_start || start + job.duration_hours > job.deadline) {
        throw DomainError(detail::cat(
            "candidate window [", format_utc_hour(start), " +", job.duration_hours,
            "h) violates the job window [", format_utc_hour(job.earliest_start), ", ",
            format_utc_hour(job.deadline), ")"));
    }
    auto it = traces.find(datacenter_id);
    if (it == traces.end()) {
        throw NotFoundError(detail::cat("no trace for datacenter '", datacenter_id, "'"));
    }
    const HourlyTrace& trace = it->second;
    if (trace.hours.empty()) {
        throw DomainError(detail::cat("trace for datacenter '", datacenter_id, "' is empty"));
    }
    const UtcHour trace_begin = trace.hours.front().timestamp;
    const UtcHour trace_end = trace.hours.back().timestamp + 1;
    if (start < trace_begin || start + job.duration_hours > trace_end) {
        throw DomainError(detail::cat("trace for datacenter '", datacenter_id,
                                      "' does not cover [", format_utc_hour(start), " +",
                                      job.duration_hours, "h)"));
    }

    const double pue = effective_pue(job, datacenter_id, registry);
    const double job_kwh_per_hour =
        static_cast<double>(job.chip_count) * job.avg_power_w * pue / 1000.0;

    double net_kg = 0.0;
    double gross_kg = 0.0;
    for (std::int64_t i = 0; i < job.duration_hours; ++i) {
        const TraceHour& h =
            trace.hours[static_cast<std::size_t>((start + i) - trace_begin)];
        // Clean energy already claimed by the baseline load: its inherent
        // grid share first, contracted energy for the rest.
        const double baseline_deficit = h.consumption_kwh * (1.0 - h.grid_cfe_fraction);
        const double leftover_contracted =
            std::max(0.0, h.contracted_cfe_kwh - baseline_deficit);
        const HourMatch m = match_hour(job_kwh_per_hour, h.grid_intensity_kg_per_kwh,
                                       h.grid_cfe_fraction, leftover_contracted);
        net_kg += m.emissions_kg;
        gross_kg += job_kwh_per_hour * h.grid_intensity_kg_per_kwh;
    }
    return {units::kg_to_tonnes(net_kg), units::kg_to_tonnes(gross_kg)};
}

namespace {

struct Enumeration {
    std::vector<Candidate> candidates;
    std::string diagnostic; // set when empty
};

Enumeration enumerate_candidates(const JobSpec& job, const TraceMap& traces,
                                 const Registry* registry) {
    validate_job(job);
    Enumeration out;
    bool any_eligible_trace = false;
    bool any_window_overlap = false;
    for (const auto& [datacenter_id, trace] : traces) {
        if (!eligible(job, datacenter_id) || trace.hours.empty()) continue;
        any_eligible_trace = true;
        const UtcHour trace_begin = trace.hours.front().timestamp;
        const UtcHour trace_end = trace.hours.back().timestamp + 1;
        const UtcHour first = std::max(job.earliest_start, trace_begin);
        const UtcHour last_exclusive =
            std::min(job.deadline, trace_end) - (job.duration_hours - 1);
        if (first >= last_exclusive) continue;
        any_window_overlap = true;
        for (UtcHour start = first; start < last_exclusive; start = start + 1) {
            const CandidateEmissions e =
                candidate_emissions(job, datacenter_id, start, traces, registry);
            out.candidates.push_back({datacenter_id, start, e.net_tco2e, e.gross_tco2e});
        }
    }
    if (out.candidates.empty()) {
        if (!any_eligible_trace) {
            out.diagnostic = "no eligible datacenter has a trace";
        } else if (!any_window_overlap) {
            out.diagnostic = detail::cat(
                "no trace covers ", job.duration_hours, " contiguous hours inside [",
                format_utc_hour(job.earliest_start), ", ", format_utc_hour(job.deadline), ")");
        }
    }
    return out;
}

} // namespace

ScheduleDecision schedule(const JobSpec& job, const TraceMap& traces,
                          const Registry* registry) {
    const Enumeration e = enumerate_candidates(job, traces, registry);
    if (e.candidates.empty()) {
        throw InfeasibleError(detail::cat("no feasible candidate for job '", job.id,
                                          "': ", e.diagnostic));
    }

    // Single pass; the tie-break makes the running minimum order-independent.
    const Candidate* best = nullptr;
    const Candidate* second = nullptr;
    for (const Candidate& c : e.candidates) {
        if (best == nullptr || better(c, *best)) {
            second = best;
            best = &c;
        } else if (second == nullptr || better(c, *second)) {
            second = &c;
        }
    }

    ScheduleDecision decision;
    decision.datacenter_id = best->datacenter_id;
    decision.start = best->start;
    decision.net_tco2e = best->net_tco2e;
    decision.gross_tco2e = best->gross_tco2e;
    if (second != nullptr) decision.runner_up = *second;
    decision.candidates_evaluated = static_cast<std::int64_t>(e.candidates.size());
    return decision;
}

WhatIfTable what_if_table(const JobSpec& job, const TraceMap& traces,
                          const Registry* registry) {
    Enumeration e = enumerate_candidates(job, traces, registry);
    WhatIfTable table;
    table.diagnostic = e.diagnostic;
    table.rows = std::move(e.candidates);
    std::sort(table.rows.begin(), table.rows.end(), better);
    return table;
}

JobSpec job_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw LoadError("job must be a JSON object");
    static constexpr const char* known[] = {
        "id",          "chip_count",     "avg_power_w",         "pue_override",
        "duration_hours", "earliest_start", "deadline", "eligible_datacenters"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw LoadError(detail::cat("job: unknown field '", key, "'"));
    }
    for (const char* k :
         {"id", "chip_count", "avg_power_w", "duration_hours", "earliest_start", "deadline"}) {
        if (!doc.contains(k)) throw LoadError(detail::cat("job: missing field '", k, "'"));
    }

    JobSpec job;
    job.id = doc.at("id").get<std::string>();
    if (!doc.at("chip_count").is_number_integer()) {
        throw LoadError("job: field 'chip_count' must be an integer");
    }
    job.chip_count = doc.at("chip_count").get<std::int64_t>();
    job.avg_power_w = doc.at("avg_power_w").get<double>();
    if (doc.contains("pue_override")) job.pue_override = doc.at("pue_override").get<double>();
    if (!doc.at("duration_hours").is_number_integer()) {
        throw LoadError("job: field 'duration_hours' must be an integer");
    }
    job.duration_hours = doc.at("duration_hours").get<std::int64_t>();
    job.earliest_start = parse_utc_hour(doc.at("earliest_start").get<std::string>());
    job.deadline = parse_utc_hour(doc.at("deadline").get<std::string>());
    if (doc.contains("eligible_datacenters")) {
        for (const auto& item : doc.at("eligible_datacenters")) {
            job.eligible_datacenters.push_back(item.get<std::string>());
        }
    }
    validate_job(job);
    return job;
}

JobSpec job_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError(detail::cat("cannot open job file '", path, "'"));
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        throw LoadError(detail::cat("job file '", path, "' is not valid JSON"));
    }
    return job_from_json(doc);
}

nlohmann::ordered_json job_to_json(const JobSpec& job) {
    nlohmann::ordered_json doc;
    doc["id"] = job.id;
    doc["chip_count"] = job.chip_count;
    doc["avg_power_w"] = job.avg_power_w;
    if (job.pue_override) doc["pue_override"] = *job.pue_override;
    doc["duration_hours"] = job.duration_hours;
    doc["earliest_start"] = format_utc_hour(job.earliest_start);
    doc["deadline"] = format_utc_hour(job.deadline);
    if (!job.eligible_datacenters.empty()) {
        doc["eligible_datacenters"] = job.eligible_datacenters;
    }
    return doc;
}

} // namespace carbonledger
