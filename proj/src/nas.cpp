// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#include "carbonledger/nas.hpp"

#include <fstream>

#include "carbonledger/accounting.hpp"
#include "carbonledger/errors.hpp"
#include "carbonledger/units.hpp"

namespace carbonledger {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw DomainError(message);
}

} // namespace

void validate_scenario(const NasScenario& s) {
    require(s.num_chips >= 1, "nas scenario: num_chips must be >= 1");
    require(s.num_train_steps >= 0, "nas scenario: num_train_steps must be >= 0");
    require(s.hours_per_train_step > 0, "nas scenario: hours_per_train_step must be > 0");

    const bool direct = s.emission_per_chip_hour_lbs.has_value();
    const int composed_fields = int(s.avg_power_w.has_value()) + int(s.pue.has_value()) +
                                int(s.intensity_lbs_per_kwh.has_value());
    if (direct) {
        require(composed_fields == 0,
                "nas scenario: emission_per_chip_hour_lbs excludes the composition fields");
        require(*s.emission_per_chip_hour_lbs > 0,
                "nas scenario: emission_per_chip_hour_lbs must be > 0");
    } else {
        require(composed_fields == 3,
                "nas scenario: need emission_per_chip_hour_lbs or all of avg_power_w, pue, "
                "intensity_lbs_per_kwh");
        require(*s.avg_power_w > 0, "nas scenario: avg_power_w must be > 0");
        require(*s.pue > 0, "nas scenario: pue must be > 0");
        require(*s.intensity_lbs_per_kwh > 0,
                "nas scenario: intensity_lbs_per_kwh must be > 0");
    }
}

double scenario_emission_rate_lbs(const NasScenario& s) {
    validate_scenario(s);
    if (s.emission_per_chip_hour_lbs) {
        return *s.emission_per_chip_hour_lbs;
    }
    return (*s.avg_power_w / 1000.0) * (*s.pue) * (*s.intensity_lbs_per_kwh);
}

NasEstimate nas_co2e(const NasScenario& s) {
    const double rate = scenario_emission_rate_lbs(s);
    NasEstimate e;
    e.lbs = static_cast<double>(s.num_chips) * s.num_train_steps * s.hours_per_train_step *
            rate;
    e.tco2e = units::pounds_to_tonnes(e.lbs);
    return e;
}

double emission_per_chip_hour(double avg_power_w, double pue, double intensity_kg_per_kwh) {
    require(avg_power_w > 0, "emission_per_chip_hour: avg_power_w must be > 0");
    require(pue > 0, "emission_per_chip_hour: pue must be > 0");
    require(intensity_kg_per_kwh > 0, "emission_per_chip_hour: intensity must be > 0");
    // kWh per chip-hour times intensity, expressed in lbs.
    return (avg_power_w / 1000.0) * pue * (intensity_kg_per_kwh / units::kKgPerPound);
}

ProxyCorrection proxy_correction(double full_estimate_lbs, double cost_per_step_factor,
                                 double batch_factor, double chip_count_factor) {
    require(full_estimate_lbs >= 0, "proxy_correction: estimate must be >= 0");
    require(cost_per_step_factor >= 1, "proxy_correction: cost_per_step_factor must be >= 1");
    require(batch_factor >= 1, "proxy_correction: batch_factor must be >= 1");
    require(chip_count_factor >= 1, "proxy_correction: chip_count_factor must be >= 1");
    ProxyCorrection c;
    c.overall_factor = cost_per_step_factor * batch_factor * chip_count_factor;
    c.corrected_lbs = full_estimate_lbs / c.overall_factor;
    return c;
}

double actual_nas_emissions(double duration_days, std::int64_t chip_count, double avg_power_w,
                            double pue, double intensity_kg_per_kwh) {
    return tco2e(energy_kwh(duration_days, chip_count, avg_power_w, pue),
                 intensity_kg_per_kwh);
}

CorrectionRatios correction_ratios(const Registry& registry, const std::string& nas_run_id,
                                   const std::string& iowa_datacenter_id) {
    const TrainingRun& run = registry.run(nas_run_id);
    const ProcessorProfile& proc = registry.processor(run.processor_id);
    const DatacenterProfile& site = registry.datacenter(run.datacenter_id);
    const DatacenterProfile& iowa = registry.datacenter(iowa_datacenter_id);
    const double power = run.power_override_w.value_or(proc.avg_system_power_w);
    const double estimate = registry.constant("strubell_nas_estimate_t").value;

    CorrectionRatios r;
    r.actual_tco2e = actual_nas_emissions(run.duration_days, run.chip_count, power, site.pue,
                                          site.net_intensity_kg_per_kwh);
    r.iowa_tco2e = actual_nas_emissions(run.duration_days, run.chip_count, power, iowa.pue,
                                        iowa.net_intensity_kg_per_kwh);
    r.ratio_vs_strubell = estimate / r.actual_tco2e;
    r.ratio_iowa = estimate / r.iowa_tco2e;
    return r;
}

NasScenario scenario_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw LoadError("nas scenario must be a JSON object");
    }
    static constexpr const char* known[] = {
        "num_chips",       "num_train_steps",          "hours_per_train_step",
        "emission_per_chip_hour_lbs", "avg_power_w",   "pue",
        "intensity_lbs_per_kwh"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw LoadError(detail::cat("nas scenario: unknown field '", key, "'"));
    }
    for (const char* k : {"num_chips", "num_train_steps", "hours_per_train_step"}) {
        if (!doc.contains(k)) {
            throw LoadError(detail::cat("nas scenario: missing field '", k, "'"));
        }
    }
    auto number = [&](const char* key) -> double {
        if (!doc.at(key).is_number()) {
            throw LoadError(detail::cat("nas scenario: field '", key, "' must be a number"));
        }
        return doc.at(key).get<double>();
    };
    auto opt_number = [&](const char* key) -> std::optional<double> {
        if (!doc.contains(key)) return std::nullopt;
        return number(key);
    };

    NasScenario s;
    if (!doc.at("num_chips").is_number_integer()) {
        throw LoadError("nas scenario: field 'num_chips' must be an integer");
    }
    s.num_chips = doc.at("num_chips").get<std::int64_t>();
    s.num_train_steps = number("num_train_steps");
    s.hours_per_train_step = number("hours_per_train_step");
    s.emission_per_chip_hour_lbs = opt_number("emission_per_chip_hour_lbs");
    s.avg_power_w = opt_number("avg_power_w");
    s.pue = opt_number("pue");
    s.intensity_lbs_per_kwh = opt_number("intensity_lbs_per_kwh");
    validate_scenario(s);
    return s;
}

NasScenario scenario_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw LoadError(detail::cat("cannot open scenario file '", path, "'"));
    }
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        throw LoadError(detail::cat("scenario file '", path, "' is not valid JSON"));
    }
    return scenario_from_json(doc);
}

nlohmann::ordered_json scenario_to_json(const NasScenario& s) {
    nlohmann::ordered_json doc;
    doc["num_chips"] = s.num_chips;
    doc["num_train_steps"] = s.num_train_steps;
    doc["hours_per_train_step"] = s.hours_per_train_step;
    if (s.emission_per_chip_hour_lbs)
        doc["emission_per_chip_hour_lbs"] = *s.emission_per_chip_hour_lbs;
    if (s.avg_power_w) doc["avg_power_w"] = *s.avg_power_w;
    if (s.pue) doc["pue"] = *s.pue;
    if (s.intensity_lbs_per_kwh) doc["intensity_lbs_per_kwh"] = *s.intensity_lbs_per_kwh;
    return doc;
}

} // namespace carbonledger
