// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace carbonledger {

/// Power-and-throughput record for one chip/system, either a fleet average
/// or a single-workload measurement (measured_tflops set in the latter case).
struct ProcessorProfile {
    std::string id;
    double peak_tflops = 0.0;
    std::optional<double> measured_tflops;
    double avg_system_power_w = 0.0;
    std::optional<double> power_stdev_pct;
    double tdp_w = 0.0;

    friend bool operator==(const ProcessorProfile&, const ProcessorProfile&) = default;
};

/// PUE and carbon intensity of one site for one accounting period.
/// `period` is "YYYY-MM", or "YYYY" when only the year is published.
struct DatacenterProfile {
    std::string id;
    std::string period;
    double pue = 0.0;
    double gross_intensity_kg_per_kwh = 0.0;
    double net_intensity_kg_per_kwh = 0.0;
    std::optional<double> cfe_fraction;

    friend bool operator==(const DatacenterProfile&, const DatacenterProfile&) = default;
};

/// One training job: chips x duration bound to a processor and a datacenter.
struct TrainingRun {
    std::string id;
    std::string processor_id;
    std::string datacenter_id;
    std::int64_t chip_count = 0;
    double duration_days = 0.0;
    std::optional<double> power_override_w;
    std::optional<double> total_flops_override;

    friend bool operator==(const TrainingRun&, const TrainingRun&) = default;
};

/// A named scalar used for perspective reporting.
struct Constant {
    std::string id;
    double value = 0.0;
    std::string unit;

    friend bool operator==(const Constant&, const Constant&) = default;
};

/// The perspective constants every report needs, resolved from the registry.
struct EquivalenceConstants {
    double jet_round_trip_t = 0.0;          // whole-plane SF<->NY round trip
    double passenger_round_trip_t = 0.0;    // one passenger on that round trip
    double sms_g = 0.0;                     // grams CO2e per SMS
    double reference_annual_energy_mwh = 0.0;
    double strubell_nas_estimate_t = 0.0;
};

enum class RecordKind { processor, datacenter, run, constant };

std::string_view to_string(RecordKind kind);

/// One invariant breach found by validation; data, not an exception.
struct Violation {
    std::string record_id;
    std::string field;
    std::string rule;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Immutable store of profiles, runs, and constants. Assemble with the
/// add_* methods (or parse from JSON), then treat as const; lookups never
/// mutate, so concurrent readers are safe.
class Registry {
public:
    void add_processor(ProcessorProfile p);
    void add_datacenter(DatacenterProfile d);
    void add_run(TrainingRun r);
    void add_constant(Constant c);

    /// Merges every record of a parsed registry document into this one.
    /// Duplicate ids are load errors.
    void merge_json(const nlohmann::json& doc);

    const ProcessorProfile& processor(const std::string& id) const;
    const DatacenterProfile& datacenter(const std::string& id) const;
    const TrainingRun& run(const std::string& id) const;
    const Constant& constant(const std::string& id) const;

    const std::map<std::string, ProcessorProfile>& processors() const { return processors_; }
    const std::map<std::string, DatacenterProfile>& datacenters() const { return datacenters_; }
    const std::map<std::string, TrainingRun>& runs() const { return runs_; }
    const std::map<std::string, Constant>& constants() const { return constants_; }

    /// Resolves the five canonical perspective constants.
    EquivalenceConstants equivalence_constants() const;

    /// Checks every record against its invariants; returns all breaches.
    std::vector<Violation> validate() const;

    nlohmann::ordered_json to_json() const;

    static Registry from_json(const nlohmann::json& doc);
    static Registry from_json_text(std::string_view text);
    static Registry from_json_file(const std::string& path);

    friend bool operator==(const Registry&, const Registry&) = default;

private:
    std::map<std::string, ProcessorProfile> processors_;
    std::map<std::string, DatacenterProfile> datacenters_;
    std::map<std::string, TrainingRun> runs_;
    std::map<std::string, Constant> constants_;
};

using Record = std::variant<ProcessorProfile, DatacenterProfile, TrainingRun, Constant>;

/// Kind-dispatched lookup over a registry.
Record registry_lookup(const Registry& registry, RecordKind kind, const std::string& id);

} // namespace carbonledger
