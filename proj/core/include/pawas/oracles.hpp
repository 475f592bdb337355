// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------
//
// Independent checks of the allocator: stationarity residuals of the
// waterfilling solution, an explicit 2x2 log-det capacity, and an exhaustive
// search over a per-point capacity lattice for small grids.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pawas/allocator.hpp"

namespace pawas {

/// 1 - eta ln2 dC/dP at the given point.
double stationarity_residual(const ChannelState& state, double power, AntennaMode mode, double eta);

struct KktReport {
    double max_residual = 0.0;
    std::size_t checked_points = 0;
    std::optional<std::size_t> worst_cell;
    double rate_residual = 0.0;  ///< |balance| of the waterfilling part
};

/// Checks every idle-trace point strictly between 0 and its cap, skipping the
/// boundary cell. Throws ValidationError when the schedule has no water level.
KktReport kkt_report(const Schedule& schedule, const CorridorGeometry& geom, const SolverConfig& cfg);

/// log2 det(I + (P/2) H^T H) for MIMO, log2(1 + P |h_2|^2) for SIMO, from the amplitudes.
double logdet_capacity(const ChannelState& state, double power, AntennaMode mode);

struct BruteForceResult {
    double avg_power = 0.0;
    std::vector<double> power;
    std::vector<AntennaMode> mode;
    std::vector<double> capacity;
    double rate_integral = 0.0;  ///< bit/Hz delivered over [0, T/2]
};

/// Minimum average power over per-point capacities on the lattice
/// {0, step, 2 step, ...} meeting the delay-insensitive rate integral,
/// solved exactly by dynamic programming. Meant for grids of a few dozen points.
BruteForceResult brute_force_delay_insensitive(const CorridorGeometry& geom, const TrafficPattern& pattern,
                                               const SolverConfig& cfg, double capacity_step = 0.01);

}  // namespace pawas
