// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#include "carbonledger/accounting.hpp"

#include "carbonledger/errors.hpp"
#include "carbonledger/units.hpp"

namespace carbonledger {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw DomainError(message);
}

struct ResolvedRun {
    const TrainingRun* run;
    const ProcessorProfile* processor;
    const DatacenterProfile* datacenter;
    double power_w;
    std::optional<double> flops;
};

ResolvedRun resolve(const Registry& registry, const std::string& run_id) {
    ResolvedRun r;
    r.run = &registry.run(run_id);
    r.processor = &registry.processor(r.run->processor_id);
    r.datacenter = &registry.datacenter(r.run->datacenter_id);
    r.power_w = r.run->power_override_w.value_or(r.processor->avg_system_power_w);
    if (r.run->total_flops_override) {
        r.flops = *r.run->total_flops_override;
    } else if (r.processor->measured_tflops) {
        r.flops = total_flops(r.run->chip_count, *r.processor->measured_tflops,
                              r.run->duration_days);
    }
    return r;
}

} // namespace

double energy_kwh(double duration_days, std::int64_t chip_count, double avg_power_w,
                  double pue) {
    require(duration_days >= 0, "energy_kwh: duration_days must be >= 0");
    require(chip_count >= 1, "energy_kwh: chip_count must be >= 1");
    require(avg_power_w > 0, "energy_kwh: avg_power_w must be > 0");
    require(pue > 0, "energy_kwh: pue must be > 0");
    return duration_days * units::kHoursPerDay * static_cast<double>(chip_count) *
           avg_power_w * pue / 1000.0;
}

double tco2e(double energy_kwh, double intensity_kg_per_kwh) {
    require(energy_kwh >= 0, "tco2e: energy_kwh must be >= 0");
    require(intensity_kg_per_kwh >= 0, "tco2e: intensity must be >= 0");
    return energy_kwh * intensity_kg_per_kwh / units::kKgPerTonne;
}

double total_flops(std::int64_t chip_count, double measured_tflops, double duration_days) {
    require(chip_count >= 1, "total_flops: chip_count must be >= 1");
    require(measured_tflops > 0, "total_flops: measured_tflops must be > 0");
    require(duration_days > 0, "total_flops: duration_days must be > 0");
    return static_cast<double>(chip_count) * measured_tflops * 1e12 * duration_days *
           units::kSecondsPerDay;
}

double duration_from_flops(double total_flops, std::int64_t chip_count,
                           double measured_tflops) {
    require(total_flops > 0, "duration_from_flops: total_flops must be > 0");
    require(chip_count >= 1, "duration_from_flops: chip_count must be >= 1");
    require(measured_tflops > 0, "duration_from_flops: measured_tflops must be > 0");
    return total_flops / (static_cast<double>(chip_count) * measured_tflops * 1e12 *
                          units::kSecondsPerDay);
}

std::vector<std::pair<std::string, double>> equivalents(
    double tco2e_tons, const EquivalenceConstants& constants) {
    return {
        {"jet_round_trip_fraction", tco2e_tons / constants.jet_round_trip_t},
        {"passenger_round_trips", tco2e_tons / constants.passenger_round_trip_t},
        {"nas_estimate_fraction", tco2e_tons / constants.strubell_nas_estimate_t},
        {"sms_messages", tco2e_tons * 1e6 / constants.sms_g},
    };
}

double pct_of_reference_energy(double energy_kwh, const EquivalenceConstants& constants) {
    return 100.0 * energy_kwh /
           units::mwh_to_kwh(constants.reference_annual_energy_mwh);
}

EmissionsReport run_report(const Registry& registry, const std::string& run_id) {
    const ResolvedRun r = resolve(registry, run_id);
    const EquivalenceConstants constants = registry.equivalence_constants();

    EmissionsReport report;
    report.energy_kwh =
        energy_kwh(r.run->duration_days, r.run->chip_count, r.power_w, r.datacenter->pue);
    report.gross_tco2e = tco2e(report.energy_kwh, r.datacenter->gross_intensity_kg_per_kwh);
    report.net_tco2e = tco2e(report.energy_kwh, r.datacenter->net_intensity_kg_per_kwh);
    report.total_flops = r.flops;
    report.equivalents = equivalents(report.net_tco2e, constants);
    report.pct_of_reference_energy = pct_of_reference_energy(report.energy_kwh, constants);
    return report;
}

ImprovementBreakdown improvement_chain(const Registry& registry,
                                       const std::string& baseline_run_id,
                                       const std::string& improved_run_id) {
    const ResolvedRun base = resolve(registry, baseline_run_id);
    const ResolvedRun better = resolve(registry, improved_run_id);

    auto net = [](const ResolvedRun& r) {
        return tco2e(energy_kwh(r.run->duration_days, r.run->chip_count, r.power_w,
                                r.datacenter->pue),
                     r.datacenter->net_intensity_kg_per_kwh);
    };
    const double improved_net = net(better);
    if (improved_net == 0.0) {
        throw DomainError(detail::cat("improvement_chain: improved run '", improved_run_id,
                                      "' has zero net emissions; ratio undefined"));
    }

    ImprovementBreakdown b;
    b.overall = net(base) / improved_net;
    b.pue_factor = base.datacenter->pue / better.datacenter->pue;
    b.intensity_factor = base.datacenter->net_intensity_kg_per_kwh /
                         better.datacenter->net_intensity_kg_per_kwh;

    // Energy ratio with PUE divided out; FLOPs ratio carves the algorithmic
    // share out of it and the rest is attributed to the hardware.
    const double energy_ratio_no_pue =
        (base.run->duration_days * static_cast<double>(base.run->chip_count) * base.power_w) /
        (better.run->duration_days * static_cast<double>(better.run->chip_count) *
         better.power_w);
    if (base.flops && better.flops) {
        b.model_factor = *base.flops / *better.flops;
    } else {
        b.model_factor = 1.0;
    }
    b.hardware_factor = energy_ratio_no_pue / b.model_factor;
    return b;
}

} // namespace carbonledger
