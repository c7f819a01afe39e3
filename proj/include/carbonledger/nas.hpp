// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "carbonledger/domain.hpp"

namespace carbonledger {

/// Inputs for a step-based architecture-search cost estimate. The emission
/// rate is given either directly (emission_per_chip_hour_lbs) or composed
/// from power, PUE, and intensity; the two forms are mutually exclusive.
struct NasScenario {
    std::int64_t num_chips = 0;
    double num_train_steps = 0.0;
    double hours_per_train_step = 0.0;
    std::optional<double> emission_per_chip_hour_lbs;
    std::optional<double> avg_power_w;
    std::optional<double> pue;
    std::optional<double> intensity_lbs_per_kwh;
};

/// Throws DomainError if fields are out of range or the rate forms clash.
void validate_scenario(const NasScenario& scenario);

/// The effective lbs-per-chip-hour rate: the direct field, or
/// power(kW) x PUE x intensity(lbs/kWh) when composed.
double scenario_emission_rate_lbs(const NasScenario& scenario);

struct NasEstimate {
    double lbs = 0.0;
    double tco2e = 0.0;
};

/// chips x steps x hours-per-step x lbs-per-chip-hour, with the metric-ton
/// equivalent alongside.
NasEstimate nas_co2e(const NasScenario& scenario);

/// Composes a lbs-per-chip-hour emission rate from average chip power,
/// PUE, and a kg/kWh grid intensity.
double emission_per_chip_hour(double avg_power_w, double pue, double intensity_kg_per_kwh);

struct ProxyCorrection {
    double corrected_lbs = 0.0;
    double overall_factor = 1.0;
};

/// Divides a full-size-task estimate down by the proxy-task savings:
/// per-step cost, batch size, and chip count. All factors must be >= 1.
ProxyCorrection proxy_correction(double full_estimate_lbs, double cost_per_step_factor,
                                 double batch_factor, double chip_count_factor);

/// Measured-inputs emissions for the search itself; exactly the composition
/// of energy_kwh and tco2e.
double actual_nas_emissions(double duration_days, std::int64_t chip_count, double avg_power_w,
                            double pue, double intensity_kg_per_kwh);

struct CorrectionRatios {
    double actual_tco2e = 0.0;
    double iowa_tco2e = 0.0;
    double ratio_vs_strubell = 0.0; // earlier published estimate / measured actual
    double ratio_iowa = 0.0;        // earlier published estimate / Iowa what-if
};

/// How far the earlier step-extrapolated estimate sits above the measured
/// search cost, as run and as it would run in the Iowa datacenter.
CorrectionRatios correction_ratios(const Registry& registry,
                                   const std::string& nas_run_id = "evolved_transformer_nas",
                                   const std::string& iowa_datacenter_id = "google_iowa_2020");

NasScenario scenario_from_json(const nlohmann::json& doc);
NasScenario scenario_from_json_file(const std::string& path);
nlohmann::ordered_json scenario_to_json(const NasScenario& scenario);

} // namespace carbonledger
