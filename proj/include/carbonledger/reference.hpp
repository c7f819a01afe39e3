// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "carbonledger/domain.hpp"
#include "carbonledger/nas.hpp"

namespace carbonledger {

/// The bundled reference registry: measured processor profiles, site-period
/// datacenter profiles, and the large-model training runs whose published
/// footprints this tool reproduces. Immutable; built once.
const Registry& reference_registry();

/// A copy of the reference registry, for callers that merge extra records.
Registry reference_registry_copy();

/// One externally published figure the reproduction suite checks against.
struct PublishedCell {
    std::string id;
    double value = 0.0;
    std::string unit;
    std::string source;
};

const std::vector<PublishedCell>& published_cells();

/// Published value for a cell id; throws NotFoundError if absent.
const PublishedCell& published_cell(const std::string& id);

/// The earlier step-extrapolated search-cost scenario (full-size task
/// assumption, 8 chips) and its proxy-task counterpart (1 chip, smaller
/// per-step cost). Rates are the published literal.
const NasScenario& strubell_full_scenario();
const NasScenario& strubell_proxy_scenario();

struct ProxyFactors {
    double cost_per_step = 1.0;
    double batch = 1.0;
    double chip_count = 1.0;
};

/// Correction factors between the two scenarios above: per-step cost 2.3x,
/// batch 8x, and the residual chips-times-step-time change derived from the
/// scenarios themselves.
ProxyFactors reference_proxy_factors();

// Canonical ids used by reproduction and ratio helpers.
inline constexpr const char* kNasRunId = "evolved_transformer_nas";
inline constexpr const char* kIowaDatacenterId = "google_iowa_2020";
inline constexpr const char* kChainBaselineRunId = "transformer_big_p100";
inline constexpr const char* kChainImprovedRunId = "evolved_transformer_medium_tpuv2";

} // namespace carbonledger
