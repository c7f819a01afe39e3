// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#include "carbonledger/nas.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

#include "carbonledger/accounting.hpp"
#include "carbonledger/errors.hpp"
#include "carbonledger/reference.hpp"
#include "carbonledger/units.hpp"

using namespace carbonledger;
using doctest::Approx;

TEST_CASE("nas_co2e reproduces the step-based estimates") {
    const NasEstimate full = nas_co2e(strubell_full_scenario());
    CHECK(std::llround(full.lbs) == 626155);
    CHECK(std::fabs(full.tco2e - 284.0) < 0.1);

    const NasEstimate proxy = nas_co2e(strubell_proxy_scenario());
    CHECK(std::llround(proxy.lbs) == 33544);
    CHECK(proxy.tco2e == Approx(15.2).epsilon(0.005));

    NasScenario idle = strubell_full_scenario();
    idle.num_train_steps = 0.0;
    CHECK(nas_co2e(idle).lbs == 0.0);
}

TEST_CASE("nas_co2e scales with every single factor") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> steps(1e3, 1e9);
    std::uniform_real_distribution<double> hours(1e-5, 1e-2);
    std::uniform_real_distribution<double> rate(0.01, 2.0);
    std::uniform_int_distribution<int> chips(1, 64);

    for (int i = 0; i < 200; ++i) {
        NasScenario s;
        s.num_chips = chips(rng);
        s.num_train_steps = steps(rng);
        s.hours_per_train_step = hours(rng);
        s.emission_per_chip_hour_lbs = rate(rng);
        const double base = nas_co2e(s).lbs;

        NasScenario twice_chips = s;
        twice_chips.num_chips *= 2;
        CHECK(nas_co2e(twice_chips).lbs == 2.0 * base);

        NasScenario twice_steps = s;
        twice_steps.num_train_steps *= 2.0;
        CHECK(nas_co2e(twice_steps).lbs == 2.0 * base);

        NasScenario twice_rate = s;
        *twice_rate.emission_per_chip_hour_lbs *= 2.0;
        CHECK(nas_co2e(twice_rate).lbs == 2.0 * base);
    }
}

TEST_CASE("emission_per_chip_hour composes power, PUE and intensity") {
    // Exact unit cancellation: 1 kW for one hour at one lb per kWh.
    CHECK(emission_per_chip_hour(1000.0, 1.0, units::kKgPerPound) == 1.0);

    // The published composition sits about 1% below the literal rate used
    // in the step-based estimates.
    const double composed = emission_per_chip_hour(189.0, 1.58, 0.429);
    CHECK(composed == Approx(0.2824297507473505).epsilon(1e-12));
    CHECK(composed / 0.2855296 == Approx(0.989).epsilon(0.005));

    CHECK_THROWS_AS(emission_per_chip_hour(0.0, 1.58, 0.429), DomainError);
    CHECK_THROWS_AS(emission_per_chip_hour(189.0, -1.0, 0.429), DomainError);
    CHECK_THROWS_AS(emission_per_chip_hour(189.0, 1.58, 0.0), DomainError);
}

TEST_CASE("proxy_correction divides the estimate down and exposes the factor") {
    const double full_lbs = nas_co2e(strubell_full_scenario()).lbs;
    const ProxyFactors f = reference_proxy_factors();
    const ProxyCorrection c =
        proxy_correction(full_lbs, f.cost_per_step, f.batch, f.chip_count);
    CHECK(std::llround(c.corrected_lbs) == 33544);
    CHECK(std::fabs(c.overall_factor - 18.67) < 0.1);

    const ProxyCorrection identity = proxy_correction(626155.0, 1.0, 1.0, 1.0);
    CHECK(identity.corrected_lbs == 626155.0);
    CHECK(identity.overall_factor == 1.0);

    const ProxyCorrection quarter = proxy_correction(100.0, 2.0, 2.0, 1.0);
    CHECK(quarter.corrected_lbs == 25.0);
    CHECK(quarter.corrected_lbs * quarter.overall_factor == 100.0);

    CHECK_THROWS_AS(proxy_correction(100.0, 0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(proxy_correction(100.0, 1.0, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(proxy_correction(-1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("proxy_correction round-trips against its factor") {
    // Dyadic factors make the division exact.
    for (double x : {626155.0, 33544.0, 1.0, 1e12}) {
        const ProxyCorrection c = proxy_correction(x, 2.0, 8.0, 1.0);
        CHECK(c.corrected_lbs * c.overall_factor == x);
    }
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> value(1.0, 1e7);
    std::uniform_real_distribution<double> factor(1.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double x = value(rng);
        const ProxyCorrection c = proxy_correction(x, factor(rng), factor(rng), factor(rng));
        CHECK(c.corrected_lbs * c.overall_factor == Approx(x).epsilon(1e-15));
    }
}

TEST_CASE("pounds and tonnes round-trip") {
    CHECK(units::pounds_to_tonnes(626155.0) == Approx(284.0).epsilon(0.0004));
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> lbs(1e-3, 1e9);
    for (int i = 0; i < 500; ++i) {
        const double x = lbs(rng);
        const double back = units::tonnes_to_pounds(units::pounds_to_tonnes(x));
        CHECK(std::fabs(back - x) / x <= 1e-12);
    }
}

TEST_CASE("actual_nas_emissions is exactly the energy/emissions composition") {
    const double direct = actual_nas_emissions(6.8, 200, 208.0, 1.10, 0.431);
    CHECK(direct == tco2e(energy_kwh(6.8, 200, 208.0, 1.10), 0.431)); // bit-for-bit
    CHECK(std::fabs(direct - 3.2) < 0.05);

    const double iowa = actual_nas_emissions(6.8, 200, 208.0, 1.11, 0.080);
    CHECK(std::fabs(iowa - 0.6) < 0.02);

    // The search consumed about 32,633 chip-hours; the day-based product
    // agrees to a tenth of a percent.
    CHECK(6.8 * 24 * 200 == Approx(32633.0).epsilon(0.001));

    CHECK_THROWS_AS(actual_nas_emissions(-1.0, 200, 208.0, 1.10, 0.431), DomainError);
}

TEST_CASE("correction_ratios compares the estimate against measured reality") {
    const Registry& reg = reference_registry();
    const CorrectionRatios r = correction_ratios(reg);
    CHECK(r.actual_tco2e == Approx(3.218721792).epsilon(1e-9));
    CHECK(r.ratio_vs_strubell >= 88.0);
    CHECK(r.ratio_vs_strubell <= 89.0);
    CHECK(r.iowa_tco2e == Approx(0.602873856).epsilon(1e-9));
    CHECK(r.ratio_iowa >= 470.0);
    CHECK(r.ratio_iowa <= 480.0);

    // ratio * actual reconstitutes the published estimate; equal estimates
    // would give a ratio of exactly one.
    CHECK(r.ratio_vs_strubell * r.actual_tco2e == Approx(284.0).epsilon(1e-12));
    CHECK(r.ratio_iowa * r.iowa_tco2e == Approx(284.0).epsilon(1e-12));
}

TEST_CASE("scenario validation enforces the exclusive rate forms") {
    NasScenario both = strubell_full_scenario();
    both.avg_power_w = 189.0;
    both.pue = 1.58;
    both.intensity_lbs_per_kwh = 0.93;
    CHECK_THROWS_AS(validate_scenario(both), DomainError);

    NasScenario partial;
    partial.num_chips = 1;
    partial.num_train_steps = 1000.0;
    partial.hours_per_train_step = 0.001;
    partial.avg_power_w = 189.0; // missing pue and intensity
    CHECK_THROWS_AS(validate_scenario(partial), DomainError);

    NasScenario composed;
    composed.num_chips = 1;
    composed.num_train_steps = 1000.0;
    composed.hours_per_train_step = 0.001;
    composed.avg_power_w = 1000.0;
    composed.pue = 1.0;
    composed.intensity_lbs_per_kwh = 1.0;
    CHECK(scenario_emission_rate_lbs(composed) == 1.0);

    NasScenario bad_chips = strubell_full_scenario();
    bad_chips.num_chips = 0;
    CHECK_THROWS_AS(validate_scenario(bad_chips), DomainError);
}

TEST_CASE("scenario JSON round-trips both rate forms") {
    const NasScenario direct = strubell_full_scenario();
    const NasScenario parsed = scenario_from_json(scenario_to_json(direct));
    CHECK(parsed.num_chips == direct.num_chips);
    CHECK(parsed.emission_per_chip_hour_lbs == direct.emission_per_chip_hour_lbs);

    const nlohmann::json composed = nlohmann::json::parse(R"({
        "num_chips": 8, "num_train_steps": 979000000.0,
        "hours_per_train_step": 0.00028,
        "avg_power_w": 189.0, "pue": 1.58, "intensity_lbs_per_kwh": 0.945784
    })");
    const NasScenario s = scenario_from_json(composed);
    CHECK(scenario_emission_rate_lbs(s) == Approx(0.189 * 1.58 * 0.945784));

    CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"num_chips": 1})")),
                    LoadError);
    CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(
                        R"({"num_chips":1,"num_train_steps":1,"hours_per_train_step":1,
                            "emission_per_chip_hour_lbs":1,"typo_field":2})")),
                    LoadError);
}
