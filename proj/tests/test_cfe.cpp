// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#include "carbonledger/cfe.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "carbonledger/errors.hpp"

using namespace carbonledger;
using doctest::Approx;

namespace {

const UtcHour kStart = parse_utc_hour("2020-06-01T00:00:00Z");

HourlyTrace make_trace(const std::vector<std::array<double, 4>>& rows) {
    HourlyTrace trace;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        trace.hours.push_back({kStart + static_cast<std::int64_t>(i), rows[i][0], rows[i][1],
                               rows[i][2], rows[i][3]});
    }
    return trace;
}

HourlyTrace random_trace(std::mt19937_64& rng, bool positive_intensity = false) {
    std::uniform_int_distribution<int> length(1, 48);
    std::uniform_real_distribution<double> consumption(0.0, 50.0);
    std::uniform_real_distribution<double> intensity(positive_intensity ? 0.01 : 0.0, 1.0);
    std::uniform_real_distribution<double> fraction(0.0, 1.0);
    std::uniform_real_distribution<double> contracted(0.0, 60.0);

    HourlyTrace trace;
    const int n = length(rng);
    for (int i = 0; i < n; ++i) {
        trace.hours.push_back({kStart + i, consumption(rng), intensity(rng), fraction(rng),
                               contracted(rng)});
    }
    return trace;
}

} // namespace

TEST_CASE("match_hour applies the per-hour netting rule") {
    // Surplus is discarded: 150 kWh of contracted clean energy against 100 kWh
    // of consumption matches only the 100.
    const HourMatch surplus = match_hour(100.0, 0.4, 0.0, 150.0);
    CHECK(surplus.residual_kwh == 0.0);
    CHECK(surplus.emissions_kg == 0.0);
    CHECK(surplus.matched_kwh == 100.0);

    const HourMatch bare = match_hour(100.0, 0.4, 0.0, 0.0);
    CHECK(bare.residual_kwh == 100.0);
    CHECK(bare.emissions_kg == 40.0);
    CHECK(bare.matched_kwh == 0.0);

    // Grid-inherent share plus contracted: supply 100*0.3 + 20 = 50.
    const HourMatch mixed = match_hour(100.0, 0.5, 0.3, 20.0);
    CHECK(mixed.matched_kwh == 50.0);
    CHECK(mixed.residual_kwh == 50.0);
    CHECK(mixed.emissions_kg == 25.0);
}

TEST_CASE("match_hour rejects out-of-range inputs") {
    CHECK_THROWS_AS(match_hour(-1.0, 0.4, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(match_hour(1.0, -0.4, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(match_hour(1.0, 0.4, 1.5, 0.0), DomainError);
    CHECK_THROWS_AS(match_hour(1.0, 0.4, -0.1, 0.0), DomainError);
    CHECK_THROWS_AS(match_hour(1.0, 0.4, 0.0, -2.0), DomainError);
}

TEST_CASE("match_trace keeps hours isolated") {
    // Hour 1 has 50 kWh of surplus; it must NOT offset hour 2's deficit.
    const HourlyTrace trace =
        make_trace({{100.0, 0.4, 0.0, 150.0}, {100.0, 0.4, 0.0, 50.0}});
    const MatchResult r = match_trace(trace);
    CHECK(r.net_tco2e == 0.020);  // 20 kg
    CHECK(r.gross_tco2e == 0.080);
    CHECK(r.cfe_percent == 75.0);
    CHECK(r.net_intensity_kg_per_kwh == 0.1);
    REQUIRE(r.per_hour.size() == 2);
    CHECK(r.per_hour[0].emissions_kg == 0.0);
    CHECK(r.per_hour[1].emissions_kg == 20.0);
}

TEST_CASE("match_trace edge shapes") {
    // Fully matched every hour.
    const MatchResult full =
        match_trace(make_trace({{10.0, 0.5, 0.0, 10.0}, {20.0, 0.5, 0.0, 25.0}}));
    CHECK(full.net_tco2e == 0.0);
    CHECK(full.cfe_percent == 100.0);

    // No clean energy at all: net equals gross, intensity passes through.
    const MatchResult none =
        match_trace(make_trace({{10.0, 0.478, 0.0, 0.0}, {10.0, 0.478, 0.0, 0.0}}));
    CHECK(none.net_tco2e == none.gross_tco2e);
    CHECK(none.net_intensity_kg_per_kwh == Approx(0.478));
    CHECK(none.cfe_percent == 0.0);

    CHECK_THROWS_AS(match_trace(HourlyTrace{}), DomainError);
}

TEST_CASE("trace validation catches bad data") {
    HourlyTrace gap = make_trace({{1.0, 0.4, 0.0, 0.0}, {1.0, 0.4, 0.0, 0.0}});
    gap.hours[1].timestamp = gap.hours[1].timestamp + 5;
    CHECK_THROWS_AS(validate_trace(gap), DomainError);

    HourlyTrace backwards = make_trace({{1.0, 0.4, 0.0, 0.0}, {1.0, 0.4, 0.0, 0.0}});
    backwards.hours[1].timestamp = backwards.hours[0].timestamp - 1;
    CHECK_THROWS_AS(validate_trace(backwards), DomainError);

    CHECK_THROWS_AS(validate_trace(make_trace({{1.0, 0.4, 2.0, 0.0}})), DomainError);
    CHECK_THROWS_AS(validate_trace(make_trace({{-1.0, 0.4, 0.0, 0.0}})), DomainError);
}

TEST_CASE("synthesize_trace spreads energy uniformly") {
    const std::vector<double> intensity(24, 0.478);
    const std::vector<double> zeros(24, 0.0);
    const HourlyTrace trace = synthesize_trace(240.0, 24, intensity, zeros, zeros);
    REQUIRE(trace.hours.size() == 24);
    for (const TraceHour& h : trace.hours) {
        CHECK(h.consumption_kwh == 10.0);
        CHECK(h.grid_intensity_kg_per_kwh == 0.478);
    }
    CHECK(format_utc_hour(trace.hours.front().timestamp) == "2020-01-01T00:00:00Z");

    const HourlyTrace idle = synthesize_trace(0.0, 24, intensity, zeros, zeros);
    for (const TraceHour& h : idle.hours) CHECK(h.consumption_kwh == 0.0);
    CHECK(match_trace(idle).net_tco2e == 0.0);
    CHECK(match_trace(idle).cfe_percent == 100.0);

    const std::vector<double> short_profile(23, 0.0);
    CHECK_THROWS_AS(synthesize_trace(240.0, 24, intensity, zeros, short_profile),
                    DomainError);
}

TEST_CASE("match_from_profile treats site-period figures as pre-computed") {
    DatacenterProfile iowa{"google_iowa_2020", "2020-12", 1.11, 0.478, 0.080, 0.78};
    const MatchResult r = match_from_profile(10000.0, iowa);
    CHECK(r.net_tco2e == Approx(0.80));
    CHECK(r.gross_tco2e == Approx(4.78));
    CHECK(r.cfe_percent == 78.0);
    CHECK(r.net_intensity_kg_per_kwh == 0.080);
    CHECK(r.per_hour.empty());

    // Without a recorded CFE share, the gross-to-net drop stands in.
    DatacenterProfile unrecorded{"site", "2020", 1.1, 0.4, 0.1, std::nullopt};
    CHECK(match_from_profile(100.0, unrecorded).cfe_percent == Approx(75.0));

    CHECK_THROWS_AS(match_from_profile(-1.0, iowa), DomainError);
}

TEST_CASE("trace CSV round-trips exactly") {
    const HourlyTrace trace = make_trace(
        {{100.25, 0.478, 0.125, 3.5}, {0.0, 0.080, 1.0, 0.0}, {7.75, 0.201, 0.5, 2.25}});
    const std::string csv = trace_to_csv(trace);
    std::istringstream in(csv);
    CHECK(parse_trace_csv(in) == trace);
}

TEST_CASE("trace CSV rejects malformed input") {
    std::istringstream bad_header("time,consumption\n");
    CHECK_THROWS_AS(parse_trace_csv(bad_header), LoadError);

    std::istringstream bad_number(
        std::string(kTraceCsvHeader) + "\n2020-06-01T00:00:00Z,abc,0.4,0,0\n");
    CHECK_THROWS_AS(parse_trace_csv(bad_number), LoadError);

    std::istringstream missing_field(
        std::string(kTraceCsvHeader) + "\n2020-06-01T00:00:00Z,1.0,0.4,0\n");
    CHECK_THROWS_AS(parse_trace_csv(missing_field), LoadError);

    std::istringstream empty("");
    CHECK_THROWS_AS(parse_trace_csv(empty), LoadError);
}

TEST_CASE("property: surplus redistribution never changes net emissions") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> extra(0.0, 40.0);
    std::uniform_real_distribution<double> pick(0.0, 1.0);

    for (int iter = 0; iter < 200; ++iter) {
        HourlyTrace trace = random_trace(rng);

        // Choose surplus hours, then top them all up above the largest
        // deficit so every permutation of their contracted values keeps
        // them surplus.
        std::vector<std::size_t> surplus_hours;
        double max_deficit = 0.0;
        for (std::size_t i = 0; i < trace.hours.size(); ++i) {
            if (pick(rng) < 0.5) {
                surplus_hours.push_back(i);
                max_deficit = std::max(max_deficit, trace.hours[i].consumption_kwh *
                                                        (1.0 - trace.hours[i].grid_cfe_fraction));
            }
        }
        for (std::size_t i : surplus_hours) {
            trace.hours[i].contracted_cfe_kwh = max_deficit + extra(rng);
        }
        const double baseline_net = match_trace(trace).net_tco2e;

        HourlyTrace permuted = trace;
        std::vector<double> values;
        for (std::size_t i : surplus_hours)
            values.push_back(permuted.hours[i].contracted_cfe_kwh);
        std::shuffle(values.begin(), values.end(), rng);
        for (std::size_t k = 0; k < surplus_hours.size(); ++k)
            permuted.hours[surplus_hours[k]].contracted_cfe_kwh = values[k];

        CHECK(match_trace(permuted).net_tco2e == baseline_net);

        // Extra contracted energy in an already-surplus hour changes nothing.
        if (!surplus_hours.empty()) {
            HourlyTrace boosted = trace;
            boosted.hours[surplus_hours[0]].contracted_cfe_kwh += 1000.0;
            CHECK(match_trace(boosted).net_tco2e == baseline_net);
        }
    }
}

TEST_CASE("property: net emissions are monotone in supply and demand") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> bump(0.0, 30.0);

    for (int iter = 0; iter < 200; ++iter) {
        HourlyTrace trace = random_trace(rng);
        const MatchResult base = match_trace(trace);
        std::uniform_int_distribution<std::size_t> index(0, trace.hours.size() - 1);

        HourlyTrace more_cfe = trace;
        more_cfe.hours[index(rng)].contracted_cfe_kwh += bump(rng);
        CHECK(match_trace(more_cfe).net_tco2e <= base.net_tco2e);

        HourlyTrace more_load = trace;
        more_load.hours[index(rng)].consumption_kwh += bump(rng);
        CHECK(match_trace(more_load).net_tco2e >= base.net_tco2e);
    }
}

TEST_CASE("property: bounds and the full-matching equivalence") {
    std::mt19937_64 rng(55);
    for (int iter = 0; iter < 200; ++iter) {
        const HourlyTrace trace = random_trace(rng, /*positive_intensity=*/true);
        const MatchResult r = match_trace(trace);
        CHECK(r.net_tco2e >= 0.0);
        CHECK(r.net_tco2e <= r.gross_tco2e);
        CHECK(r.cfe_percent >= 0.0);
        CHECK(r.cfe_percent <= 100.0);
        // With strictly positive intensities, 100% CFE and zero net
        // emissions are the same statement.
        CHECK((r.cfe_percent == 100.0) == (r.net_tco2e == 0.0));
    }
}

TEST_CASE("property: totals equal an independent re-summation") {
    std::mt19937_64 rng(66);
    for (int iter = 0; iter < 100; ++iter) {
        const HourlyTrace trace = random_trace(rng);
        const MatchResult r = match_trace(trace);
        REQUIRE(r.per_hour.size() == trace.hours.size());

        long double net_kg = 0.0L, gross_kg = 0.0L, matched = 0.0L, consumption = 0.0L;
        for (std::size_t i = trace.hours.size(); i-- > 0;) {
            const HourMatch m = match_hour(
                trace.hours[i].consumption_kwh, trace.hours[i].grid_intensity_kg_per_kwh,
                trace.hours[i].grid_cfe_fraction, trace.hours[i].contracted_cfe_kwh);
            CHECK(m.residual_kwh == r.per_hour[i].residual_kwh);
            CHECK(m.emissions_kg == r.per_hour[i].emissions_kg);
            CHECK(m.matched_kwh == r.per_hour[i].matched_kwh);
            net_kg += m.emissions_kg;
            gross_kg += trace.hours[i].consumption_kwh *
                        trace.hours[i].grid_intensity_kg_per_kwh;
            matched += m.matched_kwh;
            consumption += trace.hours[i].consumption_kwh;
        }
        CHECK(r.net_tco2e == Approx(double(net_kg) / 1000.0).epsilon(1e-9));
        CHECK(r.gross_tco2e == Approx(double(gross_kg) / 1000.0).epsilon(1e-9));
        if (consumption > 0) {
            CHECK(r.cfe_percent ==
                  Approx(100.0 * double(matched) / double(consumption)).epsilon(1e-9));
        }
    }
}
