// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <limits>

namespace pawas::units {

// Powers are normalized by the double-sided noise power and kept linear
// internally. Decibels only appear at I/O boundaries.

inline double to_db(double linear) {
    if (linear <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(linear);
}

inline double from_db(double db) {
    if (std::isinf(db)) return db > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    return std::pow(10.0, db / 10.0);
}

inline constexpr double kmh_to_mps(double kmh) { return kmh / 3.6; }
inline constexpr double mps_to_kmh(double mps) { return mps * 3.6; }
inline constexpr double ms_to_s(double ms) { return ms / 1000.0; }
inline constexpr double s_to_ms(double s) { return s * 1000.0; }

}  // namespace pawas::units
