// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------
//
// Rich-scattering channels with Nakagami-m small-scale fading of unit mean
// power. At high SNR the ergodic capacity of each spatial stream loses
// (psi(m) - ln m)/ln 2 bit/s/Hz against the deterministic channel, so MIMO
// loses twice what SIMO loses. The allocator runs unchanged on these shifted
// capacities; antenna selection falls out of comparing the two modes directly.

#pragma once

#include <cstddef>
#include <cstdint>

#include "pawas/allocator.hpp"
#include "pawas/channel_model.hpp"

namespace pawas {

struct FadingModel {
    enum class Kind { Sparse, Nakagami };

    Kind kind = Kind::Sparse;
    double m = 0.0;  ///< shape parameter, used only for Nakagami

    static FadingModel sparse() { return {}; }
    static FadingModel nakagami(double m) { return {Kind::Nakagami, m}; }

    /// Throws ValidationError when a Nakagami model has m < 0.5.
    void validate() const;
};

/// psi(x) for x > 0, good to ~1e-14 absolute away from the poles.
double digamma(double x);

struct ErgodicOffset {
    double per_stream = 0.0;  ///< (psi(m) - ln m)/ln 2, negative for finite m

    double mimo() const { return 2.0 * per_stream; }
    double simo() const { return per_stream; }
};

ErgodicOffset ergodic_offset(const FadingModel& fading);

/// Capacity law for the allocator: zero offsets for the sparse channel.
CapacityModel capacity_model(const FadingModel& fading);

/// High-SNR ergodic capacity, clamped at 0.
double ergodic_capacity(const ChannelState& state, double power, AntennaMode mode, const FadingModel& fading);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Sample mean of the instantaneous capacity with every link amplitude scaled
/// by an independent Nakagami-m draw (power ~ Gamma(m, 1/m)).
MonteCarloEstimate monte_carlo_estimate(const ChannelState& state, double power, AntennaMode mode, double m,
                                        std::size_t n_samples, std::uint64_t seed);

double monte_carlo_capacity(const ChannelState& state, double power, AntennaMode mode, double m,
                            std::size_t n_samples, std::uint64_t seed);

struct TheoremErrors {
    double max_relative = 0.0;         ///< Err_m, worst point-wise gap over both modes
    double cumulative_relative = 0.0;  ///< Err_c, worst gap of the time integrals
    std::size_t excluded_points = 0;   ///< grid points dropped because a simulated capacity was 0
    double worst_position_m = 0.0;
    AntennaMode worst_mode = AntennaMode::Off;
};

/// Closed form against Monte-Carlo over the grid, at a fixed total power.
TheoremErrors theorem_errors(const CorridorGeometry& geom, double power, double m, std::size_t n_samples,
                             std::uint64_t seed);

Schedule allocate_hybrid_nakagami(const CorridorGeometry& geom, const TrafficPattern& pattern, double m,
                                  const SolverConfig& cfg);

}  // namespace pawas
