// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace carbonledger::units {

inline constexpr double kHoursPerDay = 24.0;
inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kKwhPerMwh = 1000.0;
inline constexpr double kKgPerTonne = 1000.0;
// Exact by definition of the international avoirdupois pound.
inline constexpr double kKgPerPound = 0.45359237;

constexpr double pounds_to_tonnes(double lbs) { return lbs * kKgPerPound / kKgPerTonne; }
constexpr double tonnes_to_pounds(double tonnes) { return tonnes * kKgPerTonne / kKgPerPound; }

constexpr double kwh_to_mwh(double kwh) { return kwh / kKwhPerMwh; }
constexpr double mwh_to_kwh(double mwh) { return mwh * kKwhPerMwh; }

constexpr double kg_to_tonnes(double kg) { return kg / kKgPerTonne; }

} // namespace carbonledger::units
