// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carbonledger/domain.hpp"

namespace carbonledger {

/// Energy drawn from the grid by a training job, in kWh:
/// days x 24 x chips x average system Watts x PUE / 1000.
/// Duration may be zero; everything else must be positive.
double energy_kwh(double duration_days, std::int64_t chip_count, double avg_power_w,
                  double pue);

/// Metric tons of CO2e for a given energy and carbon intensity.
double tco2e(double energy_kwh, double intensity_kg_per_kwh);

/// Total floating-point operations: chips x TFLOPS/s x 1e12 x days x 86400.
double total_flops(std::int64_t chip_count, double measured_tflops, double duration_days);

/// Inverse of total_flops: days needed to reach a FLOP count at a measured rate.
double duration_from_flops(double total_flops, std::int64_t chip_count,
                           double measured_tflops);

/// Perspective figures for an emissions total. Labels are stable machine names.
std::vector<std::pair<std::string, double>> equivalents(double tco2e_tons,
                                                        const EquivalenceConstants& constants);

/// Share of the reference organization's annual energy, in percent.
double pct_of_reference_energy(double energy_kwh, const EquivalenceConstants& constants);

/// Full accounting output for one training run.
struct EmissionsReport {
    double energy_kwh = 0.0;
    double gross_tco2e = 0.0;
    double net_tco2e = 0.0;
    std::optional<double> total_flops;
    std::vector<std::pair<std::string, double>> equivalents;
    std::optional<double> pct_of_reference_energy;
};

/// Assembles the report for a registered run. Uses power_override_w when the
/// run carries one, the processor's average system power otherwise; FLOPs come
/// from total_flops_override or from the processor's measured throughput.
EmissionsReport run_report(const Registry& registry, const std::string& run_id);

/// Multiplicative decomposition of the net-CO2e ratio between two runs:
/// FLOPs ratio, residual energy ratio at equal PUE, PUE ratio, and net
/// intensity ratio. The stage product reconstitutes the overall ratio.
struct ImprovementBreakdown {
    double model_factor = 1.0;
    double hardware_factor = 1.0;
    double pue_factor = 1.0;
    double intensity_factor = 1.0;
    double overall = 1.0;
};

ImprovementBreakdown improvement_chain(const Registry& registry,
                                       const std::string& baseline_run_id,
                                       const std::string& improved_run_id);

} // namespace carbonledger
