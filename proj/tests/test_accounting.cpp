// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#include "carbonledger/accounting.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

#include "carbonledger/errors.hpp"
#include "carbonledger/reference.hpp"

using namespace carbonledger;
using doctest::Approx;

namespace {

double rel_diff(double computed, double expected) {
    return std::fabs(computed - expected) / std::fabs(expected);
}

} // namespace

TEST_CASE("energy_kwh matches the published training energies") {
    // gpt3: 10,000 chips at 330 W behind PUE 1.10 for 14.8 days.
    const double gpt3 = energy_kwh(14.8, 10000, 330.0, 1.10);
    CHECK(gpt3 == Approx(1289376.0));
    CHECK(rel_diff(gpt3 / 1000.0, 1287.0) < 0.005);

    CHECK(energy_kwh(3.5, 8, 296.0, 1.59) == Approx(316.27008));
    CHECK(rel_diff(energy_kwh(3.5, 8, 296.0, 1.59), 316.0) < 0.01);

    CHECK(energy_kwh(0.0, 8, 296.0, 1.59) == 0.0);

    const double meena = energy_kwh(30.0, 1024, 289.0, 1.09);
    CHECK(meena == Approx(232250.5728));
    CHECK(rel_diff(meena / 1000.0, 232.0) < 0.01);
}

TEST_CASE("energy_kwh rejects out-of-domain inputs") {
    CHECK_THROWS_AS(energy_kwh(-1.0, 8, 296.0, 1.59), DomainError);
    CHECK_THROWS_AS(energy_kwh(1.0, 0, 296.0, 1.59), DomainError);
    CHECK_THROWS_AS(energy_kwh(1.0, 8, -296.0, 1.59), DomainError);
    CHECK_THROWS_AS(energy_kwh(1.0, 8, 296.0, 0.0), DomainError);
}

TEST_CASE("energy_kwh is linear in each argument") {
    const double base = energy_kwh(3.5, 8, 296.0, 1.59);
    CHECK(energy_kwh(7.0, 8, 296.0, 1.59) == 2.0 * base);
    CHECK(energy_kwh(3.5, 16, 296.0, 1.59) == 2.0 * base);
    CHECK(energy_kwh(3.5, 8, 592.0, 1.59) == 2.0 * base);
    CHECK(energy_kwh(3.5, 8, 296.0, 3.18) == Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("emissions are invariant under chip/duration exchange") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> days(0.1, 40.0);
    std::uniform_int_distribution<int> chips(1, 4096);
    for (int i = 0; i < 200; ++i) {
        const double d = days(rng);
        const int c = chips(rng) * 2;
        const double a = tco2e(energy_kwh(d, c, 300.0, 1.1), 0.429);
        const double b = tco2e(energy_kwh(d * 2.0, c / 2, 300.0, 1.1), 0.429);
        CHECK(a == Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("tco2e matches the published emission figures") {
    CHECK(tco2e(1287000.0, 0.429) == Approx(552.123));
    CHECK(rel_diff(tco2e(1287000.0, 0.429), 552.1) < 0.001);
    CHECK(rel_diff(tco2e(316.0, 0.429), 0.1357) < 0.01);
    CHECK(tco2e(0.0, 0.429) == 0.0);
    CHECK(rel_diff(tco2e(24100.0, 0.177), 4.3) < 0.01);
    CHECK_THROWS_AS(tco2e(-1.0, 0.429), DomainError);
    CHECK_THROWS_AS(tco2e(1.0, -0.429), DomainError);
}

TEST_CASE("total_flops matches the published totals") {
    CHECK(rel_diff(total_flops(200, 24.8, 6.8), 2.91e21) < 0.01);
    CHECK(rel_diff(total_flops(1024, 42.3, 30.0), 1.12e23) < 0.01);
    CHECK(total_flops(1, 1.0, 1.0 / 86400.0) == Approx(1e12));
    CHECK_THROWS_AS(total_flops(0, 24.8, 6.8), DomainError);
    CHECK_THROWS_AS(total_flops(200, 0.0, 6.8), DomainError);
    CHECK_THROWS_AS(total_flops(200, 24.8, 0.0), DomainError);
}

TEST_CASE("duration_from_flops inverts total_flops") {
    CHECK(duration_from_flops(3.14e23, 10000, 24.6) == Approx(14.773411623005119));
    CHECK(rel_diff(duration_from_flops(3.14e23, 10000, 24.6), 14.8) < 0.01);
    CHECK(rel_diff(duration_from_flops(2.91e21, 200, 24.8), 6.8) < 0.01);
    CHECK_THROWS_AS(duration_from_flops(0.0, 10, 1.0), DomainError);
    CHECK_THROWS_AS(duration_from_flops(1e20, 0, 1.0), DomainError);

    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> days(1e-3, 100.0);
    std::uniform_real_distribution<double> tflops(0.1, 500.0);
    std::uniform_int_distribution<int> chips(1, 100000);
    for (int i = 0; i < 500; ++i) {
        const double d = days(rng);
        const double t = tflops(rng);
        const int c = chips(rng);
        const double round_trip = duration_from_flops(total_flops(c, t, d), c, t);
        CHECK(rel_diff(round_trip, d) <= 1e-12);
    }
}

TEST_CASE("run_report assembles the published table columns") {
    const Registry& reg = reference_registry();

    const EmissionsReport gpt3 = run_report(reg, "gpt3");
    CHECK(rel_diff(gpt3.energy_kwh / 1000.0, 1287.0) < 0.01);
    CHECK(rel_diff(gpt3.gross_tco2e, 552.1) < 0.015);
    CHECK(rel_diff(gpt3.net_tco2e, 552.1) < 0.015);
    CHECK(gpt3.total_flops == 3.14e23); // published override wins

    const EmissionsReport sw = run_report(reg, "switch_transformer");
    CHECK(rel_diff(sw.energy_kwh / 1000.0, 179.0) < 0.01);
    CHECK(rel_diff(sw.gross_tco2e, 72.2) < 0.015);
    CHECK(rel_diff(sw.net_tco2e, 59.1) < 0.015);

    const EmissionsReport nas = run_report(reg, "evolved_transformer_nas");
    CHECK(rel_diff(nas.energy_kwh / 1000.0, 7.5) < 0.01);
    CHECK(rel_diff(nas.net_tco2e, 3.2) < 0.01);

    CHECK_THROWS_AS(run_report(reg, "no_such_run"), NotFoundError);
}

TEST_CASE("run_report honors the power override") {
    Registry reg = reference_registry_copy();
    reg.add_run({"gpt3_hot", "v100_gpt3", "microsoft_2020", 10000, 14.8, 660.0,
                 std::nullopt});
    const EmissionsReport hot = run_report(reg, "gpt3_hot");
    const EmissionsReport base = run_report(reg, "gpt3");
    CHECK(hot.energy_kwh == Approx(2.0 * base.energy_kwh).epsilon(1e-12));
}

TEST_CASE("net emissions never exceed gross for bundled runs") {
    const Registry& reg = reference_registry();
    for (const auto& [id, run] : reg.runs()) {
        const EmissionsReport report = run_report(reg, id);
        CHECK(report.net_tco2e <= report.gross_tco2e);
        CHECK(report.energy_kwh >= 0.0);
    }
}

TEST_CASE("equivalents cover jets, passengers, searches and texts") {
    const EquivalenceConstants k = reference_registry().equivalence_constants();

    auto value = [](const std::vector<std::pair<std::string, double>>& eq,
                    const std::string& label) {
        for (const auto& [name, v] : eq)
            if (name == label) return v;
        FAIL("missing equivalent ", label);
        return 0.0;
    };

    const auto at_gpt3 = equivalents(552.1, k);
    CHECK(rel_diff(value(at_gpt3, "jet_round_trip_fraction"), 3.054) < 0.01);

    const auto at_meena = equivalents(96.4, k);
    CHECK(rel_diff(value(at_meena, "jet_round_trip_fraction"), 0.533) < 0.01);

    const auto at_zero = equivalents(0.0, k);
    for (const auto& [name, v] : at_zero) CHECK(v == 0.0);

    const auto at_nas = equivalents(3.2, k);
    CHECK(value(at_nas, "passenger_round_trips") == Approx(2.6667).epsilon(1e-3));
    CHECK(value(at_nas, "nas_estimate_fraction") == Approx(3.2 / 284.0));
    CHECK(value(at_nas, "sms_messages") == Approx(3.2e6 / 0.014));
}

TEST_CASE("pct_of_reference_energy matches the published shares") {
    const EquivalenceConstants k = reference_registry().equivalence_constants();
    CHECK(rel_diff(pct_of_reference_energy(1287000.0, k), 0.01055) < 0.01);
    CHECK(rel_diff(pct_of_reference_energy(232000.0, k), 0.00190) < 0.01);
    CHECK(pct_of_reference_energy(0.0, k) == 0.0);
}

TEST_CASE("improvement chain reproduces the overall gain") {
    const Registry& reg = reference_registry();
    const ImprovementBreakdown b =
        improvement_chain(reg, "transformer_big_p100", "evolved_transformer_medium_tpuv2");

    // Oracle: the two net footprints spelled out from raw inputs.
    const double baseline_net = 3.5 * 24 * 8 * 296.0 * 1.59 / 1000.0 * 0.429 / 1000.0;
    const double improved_net = 0.62 * 24 * 8 * 227.0 * 1.11 / 1000.0 * 0.080 / 1000.0;
    const double expected_overall = baseline_net / improved_net;
    CHECK(expected_overall == Approx(56.5436).epsilon(1e-4));

    CHECK(b.overall == Approx(expected_overall).epsilon(1e-12));
    CHECK(b.overall > 51.0);
    CHECK(b.overall < 63.0);
    CHECK(rel_diff(b.overall, 57.0) < 0.10);

    // Stage product reconstitutes the overall ratio.
    const double product =
        b.model_factor * b.hardware_factor * b.pue_factor * b.intensity_factor;
    CHECK(std::fabs(product - b.overall) <= 1e-9 * b.overall);

    CHECK(b.pue_factor == Approx(1.59 / 1.11));
    CHECK(b.intensity_factor == Approx(0.429 / 0.080));
    CHECK(b.model_factor == Approx(1.5759).epsilon(1e-4)); // fewer FLOPs to accuracy
}

TEST_CASE("improvement chain isolates the performance-per-watt gain") {
    const Registry& reg = reference_registry();
    const ImprovementBreakdown b =
        improvement_chain(reg, "transformer_big_p100", "transformer_big_tpuv2");
    CHECK(rel_diff(b.hardware_factor, 5.6) < 0.01);
}

TEST_CASE("improvement chain is the identity on a run against itself") {
    const Registry& reg = reference_registry();
    const ImprovementBreakdown b = improvement_chain(reg, "meena", "meena");
    CHECK(b.model_factor == 1.0);
    CHECK(b.hardware_factor == 1.0);
    CHECK(b.pue_factor == 1.0);
    CHECK(b.intensity_factor == 1.0);
    CHECK(b.overall == 1.0);
}

TEST_CASE("improvement chain inverts cleanly for every run pair") {
    const Registry& reg = reference_registry();
    for (const auto& [a, run_a] : reg.runs()) {
        for (const auto& [b, run_b] : reg.runs()) {
            const ImprovementBreakdown fwd = improvement_chain(reg, a, b);
            const ImprovementBreakdown rev = improvement_chain(reg, b, a);
            CHECK(std::fabs(fwd.overall * rev.overall - 1.0) <= 1e-9);
            const double product = fwd.model_factor * fwd.hardware_factor * fwd.pue_factor *
                                   fwd.intensity_factor;
            CHECK(std::fabs(product - fwd.overall) <= 1e-9 * fwd.overall);
        }
    }
}

TEST_CASE("improvement chain reports a division error on zero-emission runs") {
    Registry reg = reference_registry_copy();
    reg.add_datacenter({"all_cfe", "2020-01", 1.1, 0.4, 0.0, 1.0});
    reg.add_run({"clean_run", "tpu_v3", "all_cfe", 8, 1.0, std::nullopt, std::nullopt});
    CHECK_THROWS_AS(improvement_chain(reg, "meena", "clean_run"), DomainError);
    // The inverse direction divides by a positive value and is fine.
    CHECK(improvement_chain(reg, "clean_run", "meena").overall == 0.0);
}
