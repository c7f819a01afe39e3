// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "carbonledger/cfe.hpp"
#include "carbonledger/domain.hpp"
#include "carbonledger/timeutil.hpp"

namespace carbonledger {

/// A deferrable job: fixed shape (chips x power x contiguous hours), free to
/// start anywhere inside [earliest_start, deadline - duration].
struct JobSpec {
    std::string id;
    std::int64_t chip_count = 0;
    double avg_power_w = 0.0;
    std::optional<double> pue_override;
    std::int64_t duration_hours = 0;
    UtcHour earliest_start;
    UtcHour deadline; // job must finish by this hour
    std::vector<std::string> eligible_datacenters; // empty = all with traces

    friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

void validate_job(const JobSpec& job);

using TraceMap = std::map<std::string, HourlyTrace>;

struct CandidateEmissions {
    double net_tco2e = 0.0;
    double gross_tco2e = 0.0;
};

/// Emissions attributed to the job if placed at `start` in `datacenter_id`.
/// The job's hourly draw is added on top of the trace's baseline load;
/// contracted clean energy first covers the baseline and only the leftover
/// is available to the job, so adding a job never lowers total emissions.
/// PUE comes from the job's override, else the registry profile, else 1.0.
CandidateEmissions candidate_emissions(const JobSpec& job, const std::string& datacenter_id,
                                       UtcHour start, const TraceMap& traces,
                                       const Registry* registry = nullptr);

struct Candidate {
    std::string datacenter_id;
    UtcHour start;
    double net_tco2e = 0.0;
    double gross_tco2e = 0.0;
};

struct ScheduleDecision {
    std::string datacenter_id;
    UtcHour start;
    double net_tco2e = 0.0;
    double gross_tco2e = 0.0;
    std::optional<Candidate> runner_up;
    std::int64_t candidates_evaluated = 0;
};

/// Evaluates every eligible (datacenter, start hour) pair and returns the
/// minimum net-emissions placement. Ties go to the earlier start, then the
/// lexicographically smaller datacenter id, so the result is independent of
/// evaluation order. Throws InfeasibleError when no candidate exists.
ScheduleDecision schedule(const JobSpec& job, const TraceMap& traces,
                          const Registry* registry = nullptr);

struct WhatIfTable {
    std::vector<Candidate> rows; // ascending net emissions under the tie-break
    std::string diagnostic;      // set when rows is empty
};

/// The full candidate list behind schedule(), sorted best-first.
WhatIfTable what_if_table(const JobSpec& job, const TraceMap& traces,
                          const Registry* registry = nullptr);

JobSpec job_from_json(const nlohmann::json& doc);
JobSpec job_from_json_file(const std::string& path);
nlohmann::ordered_json job_to_json(const JobSpec& job);

} // namespace carbonledger
