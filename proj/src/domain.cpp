// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#include "carbonledger/domain.hpp"

#include <cmath>
#include <fstream>

#include "carbonledger/errors.hpp"

namespace carbonledger {

namespace {

using nlohmann::json;

[[noreturn]] void not_found(RecordKind kind, const std::string& id) {
    throw NotFoundError(detail::cat(to_string(kind), " '", id, "' not found in registry"));
}

template <typename T>
void insert_unique(std::map<std::string, T>& into, T record, RecordKind kind) {
    if (record.id.empty()) {
        throw LoadError(detail::cat(to_string(kind), " record with empty id"));
    }
    auto [it, inserted] = into.emplace(record.id, std::move(record));
    if (!inserted) {
        throw LoadError(detail::cat("duplicate ", to_string(kind), " id '", it->first, "'"));
    }
}

void require_keys(const json& obj, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const std::string& context) {
    if (!obj.is_object()) {
        throw LoadError(detail::cat(context, ": expected a JSON object"));
    }
    for (const char* key : required) {
        if (!obj.contains(key)) {
            throw LoadError(detail::cat(context, ": missing field '", key, "'"));
        }
    }
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool known = false;
        for (const char* k : required) known = known || key == k;
        for (const char* k : optional) known = known || key == k;
        if (!known) {
            throw LoadError(detail::cat(context, ": unknown field '", key, "'"));
        }
    }
}

double as_number(const json& obj, const char* key, const std::string& context) {
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw LoadError(detail::cat(context, ": field '", key, "' must be a number"));
    }
    return v.get<double>();
}

std::optional<double> as_opt_number(const json& obj, const char* key,
                                    const std::string& context) {
    if (!obj.contains(key)) return std::nullopt;
    return as_number(obj, key, context);
}

std::string as_string(const json& obj, const char* key, const std::string& context) {
    const json& v = obj.at(key);
    if (!v.is_string()) {
        throw LoadError(detail::cat(context, ": field '", key, "' must be a string"));
    }
    return v.get<std::string>();
}

std::int64_t as_integer(const json& obj, const char* key, const std::string& context) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw LoadError(detail::cat(context, ": field '", key, "' must be an integer"));
    }
    return v.get<std::int64_t>();
}

bool valid_period(const std::string& period) {
    // "YYYY" or "YYYY-MM" with a real month.
    auto digits = [](std::string_view s) {
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return !s.empty();
    };
    if (period.size() == 4) return digits(period);
    if (period.size() != 7 || period[4] != '-') return false;
    if (!digits(period.substr(0, 4)) || !digits(period.substr(5, 2))) return false;
    const int month = (period[5] - '0') * 10 + (period[6] - '0');
    return month >= 1 && month <= 12;
}

ProcessorProfile parse_processor(const json& obj) {
    const std::string context = "processor";
    require_keys(obj, {"id", "peak_tflops", "avg_system_power_w", "tdp_w"},
                 {"measured_tflops", "power_stdev_pct"}, context);
    ProcessorProfile p;
    p.id = as_string(obj, "id", context);
    p.peak_tflops = as_number(obj, "peak_tflops", context);
    p.measured_tflops = as_opt_number(obj, "measured_tflops", context);
    p.avg_system_power_w = as_number(obj, "avg_system_power_w", context);
    p.power_stdev_pct = as_opt_number(obj, "power_stdev_pct", context);
    p.tdp_w = as_number(obj, "tdp_w", context);
    return p;
}

DatacenterProfile parse_datacenter(const json& obj) {
    const std::string context = "datacenter";
    require_keys(obj,
                 {"id", "period", "pue", "gross_intensity_kg_per_kwh",
                  "net_intensity_kg_per_kwh"},
                 {"cfe_fraction"}, context);
    DatacenterProfile d;
    d.id = as_string(obj, "id", context);
    d.period = as_string(obj, "period", context);
    if (!valid_period(d.period)) {
        throw LoadError(detail::cat("datacenter '", d.id, "': period '", d.period,
                                    "' is not YYYY or YYYY-MM"));
    }
    d.pue = as_number(obj, "pue", context);
    d.gross_intensity_kg_per_kwh = as_number(obj, "gross_intensity_kg_per_kwh", context);
    d.net_intensity_kg_per_kwh = as_number(obj, "net_intensity_kg_per_kwh", context);
    d.cfe_fraction = as_opt_number(obj, "cfe_fraction", context);
    return d;
}

TrainingRun parse_run(const json& obj) {
    const std::string context = "run";
    require_keys(obj, {"id", "processor_id", "datacenter_id", "chip_count", "duration_days"},
                 {"power_override_w", "total_flops_override"}, context);
    TrainingRun r;
    r.id = as_string(obj, "id", context);
    r.processor_id = as_string(obj, "processor_id", context);
    r.datacenter_id = as_string(obj, "datacenter_id", context);
    r.chip_count = as_integer(obj, "chip_count", context);
    r.duration_days = as_number(obj, "duration_days", context);
    r.power_override_w = as_opt_number(obj, "power_override_w", context);
    r.total_flops_override = as_opt_number(obj, "total_flops_override", context);
    return r;
}

Constant parse_constant(const json& obj) {
    const std::string context = "constant";
    require_keys(obj, {"id", "value", "unit"}, {}, context);
    Constant c;
    c.id = as_string(obj, "id", context);
    c.value = as_number(obj, "value", context);
    c.unit = as_string(obj, "unit", context);
    return c;
}

} // namespace

std::string_view to_string(RecordKind kind) {
    switch (kind) {
    case RecordKind::processor: return "processor";
    case RecordKind::datacenter: return "datacenter";
    case RecordKind::run: return "run";
    case RecordKind::constant: return "constant";
    }
    return "unknown";
}

void Registry::add_processor(ProcessorProfile p) {
    insert_unique(processors_, std::move(p), RecordKind::processor);
}

void Registry::add_datacenter(DatacenterProfile d) {
    insert_unique(datacenters_, std::move(d), RecordKind::datacenter);
}

void Registry::add_run(TrainingRun r) { insert_unique(runs_, std::move(r), RecordKind::run); }

void Registry::add_constant(Constant c) {
    insert_unique(constants_, std::move(c), RecordKind::constant);
}

void Registry::merge_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw LoadError("registry document must be a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (key != "processors" && key != "datacenters" && key != "runs" &&
            key != "constants") {
            throw LoadError(detail::cat("registry document: unknown section '", key, "'"));
        }
        if (!value.is_array()) {
            throw LoadError(detail::cat("registry section '", key, "' must be an array"));
        }
    }
    if (doc.contains("processors")) {
        for (const auto& item : doc.at("processors")) add_processor(parse_processor(item));
    }
    if (doc.contains("datacenters")) {
        for (const auto& item : doc.at("datacenters")) add_datacenter(parse_datacenter(item));
    }
    if (doc.contains("runs")) {
        for (const auto& item : doc.at("runs")) add_run(parse_run(item));
    }
    if (doc.contains("constants")) {
        for (const auto& item : doc.at("constants")) add_constant(parse_constant(item));
    }
}

const ProcessorProfile& Registry::processor(const std::string& id) const {
    auto it = processors_.find(id);
    if (it == processors_.end()) not_found(RecordKind::processor, id);
    return it->second;
}

const DatacenterProfile& Registry::datacenter(const std::string& id) const {
    auto it = datacenters_.find(id);
    if (it == datacenters_.end()) not_found(RecordKind::datacenter, id);
    return it->second;
}

const TrainingRun& Registry::run(const std::string& id) const {
    auto it = runs_.find(id);
    if (it == runs_.end()) not_found(RecordKind::run, id);
    return it->second;
}

const Constant& Registry::constant(const std::string& id) const {
    auto it = constants_.find(id);
    if (it == constants_.end()) not_found(RecordKind::constant, id);
    return it->second;
}

EquivalenceConstants Registry::equivalence_constants() const {
    EquivalenceConstants k;
    k.jet_round_trip_t = constant("jet_round_trip_t").value;
    k.passenger_round_trip_t = constant("passenger_round_trip_t").value;
    k.sms_g = constant("sms_g").value;
    k.reference_annual_energy_mwh = constant("reference_annual_energy_mwh").value;
    k.strubell_nas_estimate_t = constant("strubell_nas_estimate_t").value;
    return k;
}

std::vector<Violation> Registry::validate() const {
    std::vector<Violation> out;
    auto check = [&](bool ok, const std::string& id, const char* field, const char* rule) {
        if (!ok) out.push_back({id, field, rule});
    };

    for (const auto& [id, p] : processors_) {
        check(p.avg_system_power_w > 0, id, "avg_system_power_w", "avg_system_power_w > 0");
        check(p.tdp_w > 0, id, "tdp_w", "tdp_w > 0");
        check(p.peak_tflops > 0, id, "peak_tflops", "peak_tflops > 0");
        if (p.measured_tflops) {
            check(*p.measured_tflops > 0, id, "measured_tflops", "measured_tflops > 0");
            check(*p.measured_tflops <= p.peak_tflops, id, "measured_tflops",
                  "measured_tflops <= peak_tflops");
        }
        if (p.power_stdev_pct) {
            check(*p.power_stdev_pct >= 0, id, "power_stdev_pct", "power_stdev_pct >= 0");
        }
    }

    for (const auto& [id, d] : datacenters_) {
        check(d.pue >= 1.0, id, "pue", "pue >= 1.0");
        check(d.net_intensity_kg_per_kwh >= 0, id, "net_intensity_kg_per_kwh",
              "net_intensity_kg_per_kwh >= 0");
        check(d.net_intensity_kg_per_kwh <= d.gross_intensity_kg_per_kwh, id,
              "net_intensity_kg_per_kwh",
              "net_intensity_kg_per_kwh <= gross_intensity_kg_per_kwh");
        if (d.cfe_fraction) {
            check(*d.cfe_fraction >= 0.0 && *d.cfe_fraction <= 1.0, id, "cfe_fraction",
                  "cfe_fraction in [0, 1]");
        }
    }

    for (const auto& [id, r] : runs_) {
        check(r.chip_count >= 1, id, "chip_count", "chip_count >= 1");
        check(r.duration_days > 0, id, "duration_days", "duration_days > 0");
        check(processors_.count(r.processor_id) == 1, id, "processor_id",
              "references an existing processor");
        check(datacenters_.count(r.datacenter_id) == 1, id, "datacenter_id",
              "references an existing datacenter");
        if (r.power_override_w) {
            check(*r.power_override_w > 0, id, "power_override_w", "power_override_w > 0");
        }
        if (r.total_flops_override) {
            check(*r.total_flops_override > 0, id, "total_flops_override",
                  "total_flops_override > 0");
        }
    }

    for (const auto& [id, c] : constants_) {
        check(c.value > 0, id, "value", "value > 0");
    }

    return out;
}

nlohmann::ordered_json Registry::to_json() const {
    nlohmann::ordered_json doc;
    auto& processors = doc["processors"] = nlohmann::ordered_json::array();
    for (const auto& [id, p] : processors_) {
        nlohmann::ordered_json obj;
        obj["id"] = p.id;
        obj["peak_tflops"] = p.peak_tflops;
        if (p.measured_tflops) obj["measured_tflops"] = *p.measured_tflops;
        obj["avg_system_power_w"] = p.avg_system_power_w;
        if (p.power_stdev_pct) obj["power_stdev_pct"] = *p.power_stdev_pct;
        obj["tdp_w"] = p.tdp_w;
        processors.push_back(std::move(obj));
    }
    auto& datacenters = doc["datacenters"] = nlohmann::ordered_json::array();
    for (const auto& [id, d] : datacenters_) {
        nlohmann::ordered_json obj;
        obj["id"] = d.id;
        obj["period"] = d.period;
        obj["pue"] = d.pue;
        obj["gross_intensity_kg_per_kwh"] = d.gross_intensity_kg_per_kwh;
        obj["net_intensity_kg_per_kwh"] = d.net_intensity_kg_per_kwh;
        if (d.cfe_fraction) obj["cfe_fraction"] = *d.cfe_fraction;
        datacenters.push_back(std::move(obj));
    }
    auto& runs = doc["runs"] = nlohmann::ordered_json::array();
    for (const auto& [id, r] : runs_) {
        nlohmann::ordered_json obj;
        obj["id"] = r.id;
        obj["processor_id"] = r.processor_id;
        obj["datacenter_id"] = r.datacenter_id;
        obj["chip_count"] = r.chip_count;
        obj["duration_days"] = r.duration_days;
        if (r.power_override_w) obj["power_override_w"] = *r.power_override_w;
        if (r.total_flops_override) obj["total_flops_override"] = *r.total_flops_override;
        runs.push_back(std::move(obj));
    }
    auto& constants = doc["constants"] = nlohmann::ordered_json::array();
    for (const auto& [id, c] : constants_) {
        nlohmann::ordered_json obj;
        obj["id"] = c.id;
        obj["value"] = c.value;
        obj["unit"] = c.unit;
        constants.push_back(std::move(obj));
    }
    return doc;
}

Registry Registry::from_json(const nlohmann::json& doc) {
    Registry registry;
    registry.merge_json(doc);
    return registry;
}

Registry Registry::from_json_text(std::string_view text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw LoadError("registry document is not valid JSON");
    }
    return from_json(doc);
}

Registry Registry::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw LoadError(detail::cat("cannot open registry file '", path, "'"));
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

Record registry_lookup(const Registry& registry, RecordKind kind, const std::string& id) {
    switch (kind) {
    case RecordKind::processor: return registry.processor(id);
    case RecordKind::datacenter: return registry.datacenter(id);
    case RecordKind::run: return registry.run(id);
    case RecordKind::constant: return registry.constant(id);
    }
    throw DomainError("unknown record kind");
}

} // namespace carbonledger
