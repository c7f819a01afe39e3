// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "carbonledger/accounting.hpp"
#include "carbonledger/cfe.hpp"
#include "carbonledger/domain.hpp"
#include "carbonledger/scheduler.hpp"
#include "carbonledger/table.hpp"

namespace carbonledger {

/// exp(mean(log x)); every ratio must be positive and the list non-empty.
double geometric_mean(std::span<const double> ratios);

/// What a reproduction case computes before comparing against its expected
/// published value.
enum class ReproMetric {
    run_energy_mwh,
    run_energy_kwh,
    run_gross_from_published_energy,
    run_net_from_published_energy,
    run_gross_tco2e,
    run_total_flops,
    run_duration_days,
    run_pct_reference_energy,
    run_jet_fraction,
    run_nas_estimate_fraction,
    nas_full_lbs,
    nas_proxy_lbs,
    nas_proxy_overall_factor,
    nas_actual_tco2e,
    nas_ratio_vs_strubell,
    nas_iowa_tco2e,
    nas_ratio_iowa,
    chain_overall,
};

struct ReproCase {
    std::string id;         // also the published-cell id
    std::string subject_id; // run id when the metric needs one
    ReproMetric metric = ReproMetric::run_energy_mwh;
    double expected_value = 0.0;
    std::string unit;
    double tolerance_pct = 0.0;
    std::string source;
};

/// Builds a case whose expected value comes from the published-cells list.
/// Throws DomainError when tolerance_pct <= 0 and NotFoundError when the
/// cell id is unknown.
ReproCase make_repro_case(const std::string& cell_id, const std::string& subject_id,
                          ReproMetric metric, double tolerance_pct);

/// Every reproduction case for the bundled reference dataset.
const std::vector<ReproCase>& reference_repro_cases();

struct ReproResult {
    ReproCase repro_case;
    double computed = 0.0;
    double rel_diff_pct = 0.0;
    bool passed = false;
};

struct ReproReport {
    std::vector<ReproResult> results;
    bool all_passed = true;
};

double evaluate_repro_case(const Registry& registry, const ReproCase& repro_case);

/// Runs every reference case against a registry.
ReproReport reproduce(const Registry& registry);

struct ComparisonEntry {
    std::string case_id;
    double external_estimate_t = 0.0;
    double ledger_gross_t = 0.0;
    double ratio = 0.0; // external / ledger
};

struct ComparisonSet {
    std::vector<ComparisonEntry> entries;
    double geometric_mean = 0.0;
};

/// Ratios of externally estimated gross emissions to this ledger's gross
/// emissions, per run, plus their geometric mean.
ComparisonSet compare_external(const Registry& registry,
                               std::span<const std::pair<std::string, double>> external);

inline constexpr const char* kExternalEstimatesCsvHeader = "case_id,external_estimate_t";

std::vector<std::pair<std::string, double>> parse_external_estimates_csv(std::istream& in);
std::vector<std::pair<std::string, double>> parse_external_estimates_csv_file(
    const std::string& path);

// Table builders for the renderer.
Table emissions_report_table(const std::string& subject, const EmissionsReport& report);
Table match_result_table(const MatchResult& result);
Table match_per_hour_table(const HourlyTrace& trace, const MatchResult& result);
Table schedule_decision_table(const ScheduleDecision& decision);
Table what_if_rows_table(const WhatIfTable& table);
Table repro_report_table(const ReproReport& report);
Table comparison_table(const ComparisonSet& set);

} // namespace carbonledger
