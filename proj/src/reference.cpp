// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#include "carbonledger/reference.hpp"

#include "carbonledger/errors.hpp"

namespace carbonledger {

namespace {

Registry build_reference_registry() {
    Registry r;

    // Fleet-average processor profiles (power averaged over the workloads
    // measured on each system).
    r.add_processor({"p100", 19.0, std::nullopt, 271.0, 11.0, 300.0});
    r.add_processor({"v100", 125.0, std::nullopt, 325.0, 2.0, 300.0});
    r.add_processor({"tpu_v2", 46.0, std::nullopt, 221.0, 5.0, 280.0});
    r.add_processor({"tpu_v3", 123.0, std::nullopt, 283.0, 10.0, 450.0});

    // Per-workload measurements: throughput and system power as observed for
    // one model on one system.
    r.add_processor({"p100_transformer_big", 19.0, 6.7, 296.0, std::nullopt, 300.0});
    r.add_processor({"p100_evolved_transformer", 19.0, 4.7, 271.0, std::nullopt, 300.0});
    r.add_processor({"tpu_v2_transformer_big", 46.0, 28.8, 229.0, std::nullopt, 280.0});
    r.add_processor({"tpu_v2_evolved_transformer", 46.0, 24.0, 227.0, std::nullopt, 280.0});
    r.add_processor({"tpu_v2_nas", 46.0, 24.8, 208.0, std::nullopt, 280.0});
    r.add_processor({"tpu_v3_t5", 123.0, 45.6, 310.0, std::nullopt, 450.0});
    r.add_processor({"tpu_v3_meena", 123.0, 42.3, 289.0, std::nullopt, 450.0});
    r.add_processor({"tpu_v3_gshard", 123.0, 48.0, 288.0, std::nullopt, 450.0});
    r.add_processor({"tpu_v3_switch", 123.0, 34.4, 245.0, std::nullopt, 450.0});
    r.add_processor({"v100_gpt3", 125.0, 24.6, 330.0, std::nullopt, 300.0});

    // Site-period datacenter profiles. Year-only periods mark figures
    // published as annual averages.
    r.add_datacenter({"us_average_2020", "2020", 1.59, 0.429, 0.429, std::nullopt});
    r.add_datacenter({"microsoft_2020", "2020", 1.10, 0.429, 0.429, std::nullopt});
    r.add_datacenter({"google_iowa_2020", "2020-12", 1.11, 0.478, 0.080, 0.78});
    r.add_datacenter({"google_georgia_2018", "2018-12", 1.10, 0.431, 0.431, 0.31});
    r.add_datacenter({"google_taiwan_2019", "2019-09", 1.12, 0.545, 0.545, 0.19});
    r.add_datacenter({"google_georgia_2019", "2019-12", 1.09, 0.415, 0.415, 0.30});
    r.add_datacenter({"google_north_carolina_2020", "2020-04", 1.09, 0.201, 0.177, 0.73});
    r.add_datacenter({"google_georgia_2020", "2020-10", 1.10, 0.403, 0.330, 0.43});

    // Training runs. Energy and emissions are always derived from these
    // inputs; published table cells live in published_cells() instead.
    r.add_run({"transformer_big_p100", "p100_transformer_big", "us_average_2020", 8, 3.5,
               std::nullopt, std::nullopt});
    r.add_run({"evolved_transformer_medium_p100", "p100_evolved_transformer",
               "us_average_2020", 8, 3.2, std::nullopt, std::nullopt});
    r.add_run({"transformer_big_tpuv2", "tpu_v2_transformer_big", "google_iowa_2020", 8, 0.81,
               std::nullopt, std::nullopt});
    r.add_run({"evolved_transformer_medium_tpuv2", "tpu_v2_evolved_transformer",
               "google_iowa_2020", 8, 0.62, std::nullopt, std::nullopt});
    r.add_run({"evolved_transformer_nas", "tpu_v2_nas", "google_georgia_2018", 200, 6.8,
               std::nullopt, std::nullopt});
    r.add_run({"t5", "tpu_v3_t5", "google_taiwan_2019", 512, 20.0, std::nullopt,
               std::nullopt});
    r.add_run({"meena", "tpu_v3_meena", "google_georgia_2019", 1024, 30.0, std::nullopt,
               std::nullopt});
    r.add_run({"gshard_600b", "tpu_v3_gshard", "google_north_carolina_2020", 1024, 3.1,
               std::nullopt, std::nullopt});
    r.add_run({"switch_transformer", "tpu_v3_switch", "google_georgia_2020", 1024, 27.0,
               std::nullopt, std::nullopt});
    // Total FLOPs for gpt3 were published by the model's developers; the
    // duration is back-derived from them in the reproduction suite.
    r.add_run({"gpt3", "v100_gpt3", "microsoft_2020", 10000, 14.8, std::nullopt, 3.14e23});

    r.add_constant({"jet_round_trip_t", 180.4, "tCO2e"});
    r.add_constant({"passenger_round_trip_t", 1.2, "tCO2e"});
    r.add_constant({"sms_g", 0.014, "gCO2e"});
    r.add_constant({"reference_annual_energy_mwh", 12200000.0, "MWh"});
    r.add_constant({"strubell_nas_estimate_t", 284.0, "tCO2e"});

    return r;
}

std::vector<PublishedCell> build_published_cells() {
    const std::string energy = "published energy consumption";
    const std::string gross = "published gross emissions";
    const std::string net = "published net emissions";
    const std::string derived = "published derived figure";
    const std::string nas = "published search-cost estimate";

    return {
        // Energy consumption of the large-model runs, in MWh.
        {"t5_energy_mwh", 85.7, "MWh", energy},
        {"meena_energy_mwh", 232.0, "MWh", energy},
        {"gshard_600b_energy_mwh", 24.1, "MWh", energy},
        {"switch_transformer_energy_mwh", 179.0, "MWh", energy},
        {"gpt3_energy_mwh", 1287.0, "MWh", energy},
        {"evolved_transformer_nas_energy_mwh", 7.5, "MWh", energy},

        // Gross and net emissions for the same runs, in metric tons.
        {"t5_gross_tco2e", 46.7, "tCO2e", gross},
        {"meena_gross_tco2e", 96.4, "tCO2e", gross},
        {"gshard_600b_gross_tco2e", 4.8, "tCO2e", gross},
        {"switch_transformer_gross_tco2e", 72.2, "tCO2e", gross},
        {"gpt3_gross_tco2e", 552.1, "tCO2e", gross},
        {"evolved_transformer_nas_gross_tco2e", 3.2, "tCO2e", gross},
        {"t5_net_tco2e", 46.7, "tCO2e", net},
        {"meena_net_tco2e", 96.4, "tCO2e", net},
        {"gshard_600b_net_tco2e", 4.3, "tCO2e", net},
        {"switch_transformer_net_tco2e", 59.1, "tCO2e", net},
        {"gpt3_net_tco2e", 552.1, "tCO2e", net},
        {"evolved_transformer_nas_net_tco2e", 3.2, "tCO2e", net},

        // The small-model baseline measured on P100s in an average US site.
        {"transformer_big_p100_energy_kwh", 316.0, "kWh", energy},
        {"transformer_big_p100_gross_tco2e", 0.1357, "tCO2e", gross},

        // Derived quantities.
        {"gpt3_total_flops", 3.14e23, "FLOPs", "published total computation"},
        {"gpt3_duration_days", 14.8, "days", derived},
        {"evolved_transformer_nas_total_flops", 2.91e21, "FLOPs", derived},
        {"gpt3_pct_reference_energy", 0.01055, "%", derived},
        {"gpt3_jet_fraction", 3.054, "round trips", derived},
        {"meena_jet_fraction", 0.533, "round trips", derived},
        {"gpt3_nas_estimate_fraction", 1.944, "x", derived},

        // Step-based search-cost estimates and their corrections.
        {"nas_strubell_full_lbs", 626155.0, "lbs CO2e", nas},
        {"nas_strubell_proxy_lbs", 33544.0, "lbs CO2e", nas},
        {"nas_proxy_overall_factor", 18.6667, "x", nas},
        {"nas_actual_tco2e", 3.2, "tCO2e", "published measured search cost"},
        {"nas_ratio_vs_strubell", 88.5, "x", nas},
        {"nas_iowa_tco2e", 0.6, "tCO2e", "published what-if search cost"},
        {"nas_ratio_iowa", 475.0, "x", nas},

        // Overall improvement from model + hardware + datacenter + energy mix.
        {"improvement_chain_overall", 57.0, "x", derived},
    };
}

} // namespace

const Registry& reference_registry() {
    static const Registry registry = build_reference_registry();
    return registry;
}

Registry reference_registry_copy() { return reference_registry(); }

const std::vector<PublishedCell>& published_cells() {
    static const std::vector<PublishedCell> cells = build_published_cells();
    return cells;
}

const PublishedCell& published_cell(const std::string& id) {
    for (const PublishedCell& cell : published_cells()) {
        if (cell.id == id) return cell;
    }
    throw NotFoundError(detail::cat("published cell '", id, "' not found"));
}

const NasScenario& strubell_full_scenario() {
    static const NasScenario s = [] {
        NasScenario v;
        v.num_chips = 8;
        v.num_train_steps = 979e6;
        v.hours_per_train_step = 0.00028;
        v.emission_per_chip_hour_lbs = 0.2855296;
        return v;
    }();
    return s;
}

const NasScenario& strubell_proxy_scenario() {
    static const NasScenario s = [] {
        NasScenario v;
        v.num_chips = 1;
        v.num_train_steps = 979e6;
        v.hours_per_train_step = 0.00012;
        v.emission_per_chip_hour_lbs = 0.2855296;
        return v;
    }();
    return s;
}

ProxyFactors reference_proxy_factors() {
    const NasScenario& full = strubell_full_scenario();
    const NasScenario& proxy = strubell_proxy_scenario();
    ProxyFactors f;
    f.cost_per_step = 2.3;
    f.batch = 8.0;
    // Chip count dropped 8x while per-step time changed; the residual keeps
    // the three factors consistent with the two published scenarios.
    const double chip_hour_ratio =
        (static_cast<double>(full.num_chips) * full.hours_per_train_step) /
        (static_cast<double>(proxy.num_chips) * proxy.hours_per_train_step);
    f.chip_count = chip_hour_ratio / (f.cost_per_step * f.batch);
    return f;
}

} // namespace carbonledger
