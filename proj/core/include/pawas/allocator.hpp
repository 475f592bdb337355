// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------
//
// Power allocation with antenna selection over the half period [0, T/2].
//
//  * delay-insensitive traffic: generalized waterfilling, with the water
//    level eta found by bracketing and bisection on the rate integral;
//  * delay-sensitive traffic: channel inversion to C* = L-bar mu_s in the
//    cheaper antenna mode;
//  * hybrid traffic: the waterfilling part is solved against the rate left
//    over after the expected delay-sensitive occupancy, and the busy-state
//    power is the larger of the two parts.
//
// Every solver works point-wise on the grid of CorridorGeometry and is
// parameterized by a CapacityModel, so the same code serves the
// deterministic channel and the Nakagami-m ergodic capacities.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "pawas/channel_model.hpp"
#include "pawas/traffic.hpp"

namespace pawas {

enum class ModePolicy { Adaptive, MimoOnly, SimoOnly };

struct SolverConfig {
    double epsilon = 1e-3;  ///< tolerance on the rate-balance integral, bit/Hz
    double p_max = std::numeric_limits<double>::infinity();  ///< per-RAU cap, linear
    double eta_expand_factor = 10.0;
    int max_bisection_iters = 200;
    double eta_initial = 1.0;
    /// Bisection keeps shrinking the bracket until it is this narrow relative
    /// to eta, so comparisons between solutions are not dominated by epsilon.
    double bracket_rel_tol = 1e-12;
    ModePolicy mode_policy = ModePolicy::Adaptive;

    void validate() const;

    /// Total transmit power cap: 2 p_max with both RAUs on, p_max for one.
    double power_cap(AntennaMode mode) const;
    bool allows(AntennaMode mode) const;
};

/// Capacity of each antenna mode with a constant additive offset per mode,
/// clamped at zero. Offsets are zero for the deterministic channel.
struct CapacityModel {
    double mimo_offset = 0.0;
    double simo_offset = 0.0;

    double capacity(const ChannelState& state, double power, AntennaMode mode) const;
    /// Least power achieving capacity c in the given mode.
    double inverse(const ChannelState& state, double c, AntennaMode mode) const;
    double offset(AntennaMode mode) const;
};

struct PointAllocation {
    double power = 0.0;
    AntennaMode mode = AntennaMode::Off;
    double capacity = 0.0;
};

/// Point-wise minimizer of the Lagrangian P - eta ln2 C(P) over both modes
/// (each clamped to its cap) and P = 0. Ties go to MIMO.
PointAllocation waterfill_power(const ChannelState& state, double eta, const SolverConfig& cfg,
                                const CapacityModel& model = {});

/// Stationary point of the Lagrangian for one mode before clamping:
/// eta - 1/alpha2 for SIMO, the larger root of a P^2 + (b - 2 eta a) P + (1 - eta b) for MIMO.
double stationary_power(const ChannelState& state, double eta, AntennaMode mode);

/// Cheapest allowed mode that delivers capacity c within its cap. When the
/// cheaper mode is over its cap the other one is used. Throws InfeasibleError.
PointAllocation channel_inversion(const ChannelState& state, double c, const SolverConfig& cfg,
                                  const CapacityModel& model = {});

struct Trace {
    std::vector<double> power;
    std::vector<AntennaMode> mode;
    std::vector<double> capacity;

    std::size_t size() const { return power.size(); }
    void resize(std::size_t n);
    void set(std::size_t k, const PointAllocation& a);
    PointAllocation at(std::size_t k) const { return {power[k], mode[k], capacity[k]}; }
};

struct Schedule {
    TrafficClass traffic_class = TrafficClass::DelayInsensitive;
    std::vector<double> positions;
    /// Realized power when the delay-sensitive queue is busy. Equal to idle
    /// for delay-insensitive traffic.
    Trace busy;
    /// Waterfilling part, used while the delay-sensitive queue is empty.
    /// All OFF for pure delay-sensitive traffic.
    Trace idle;
    /// Channel-inversion bound for the delay-sensitive part. All OFF without it.
    Trace bound;
    double busy_probability = 0.0;
    double required_capacity = 0.0;
    double avg_power = 0.0;
    std::optional<double> eta;
    /// Rate-balance residual of the waterfilling part, bit/Hz.
    std::optional<double> rate_residual;
    /// Grid cell whose power was set off the stationary point to close the rate
    /// balance across a mode-switch discontinuity.
    std::optional<std::size_t> boundary_cell;
    int iterations = 0;

    std::size_t size() const { return positions.size(); }
};

struct EtaSolution {
    double eta = 0.0;          ///< upper end of the final bracket, balance(eta) >= 0
    double residual = 0.0;     ///< balance(eta)
    double eta_lower = 0.0;    ///< lower end, balance < 0 there
    double residual_lower = 0.0;
    int iterations = 0;
    /// True when the bracket shrank to nothing with residual still >= epsilon,
    /// i.e. the balance jumps across the target.
    bool discontinuous = false;
};

/// Expands eta_max by cfg.eta_expand_factor until balance >= 0, then bisects,
/// keeping the upper end on the feasible side. Throws ConvergenceError when
/// cfg.max_bisection_iters is exhausted.
EtaSolution solve_eta(const std::function<double(double)>& balance, const SolverConfig& cfg);

/// Rate-balance weight of one cell: C - p_on min(L-bar mu_s, C).
double delay_insensitive_share(double capacity, const QueueModel& queue, double mean_packet_bits_per_hz);

Schedule allocate_delay_insensitive(const CorridorGeometry& geom, const TrafficPattern& pattern,
                                    const SolverConfig& cfg, const CapacityModel& model = {});
Schedule allocate_delay_sensitive(const CorridorGeometry& geom, const TrafficPattern& pattern,
                                  const SolverConfig& cfg, const CapacityModel& model = {});
/// Also accepts the degenerate triples: lambda_s = 0 gives the delay-insensitive
/// schedule, lambda_i = 0 the delay-sensitive one.
Schedule allocate_hybrid(const CorridorGeometry& geom, const TrafficPattern& pattern,
                         const SolverConfig& cfg, const CapacityModel& model = {});

/// Dispatch on pattern.classify().
Schedule allocate(const CorridorGeometry& geom, const TrafficPattern& pattern, const SolverConfig& cfg,
                  const CapacityModel& model = {});

/// Constant power in a fixed mode meeting the delay-insensitive rate integral.
Schedule even_power_baseline(const CorridorGeometry& geom, const TrafficPattern& pattern, AntennaMode mode,
                             const SolverConfig& cfg, const CapacityModel& model = {});

/// (2/T) * integral of the expected power: (1 - p_on) idle + p_on busy, trapezoidal.
double average_power(const Schedule& schedule);

/// One realization of the queue state: each cell is busy with probability
/// p_on, independently, and takes its power from the busy or idle trace.
Trace sample_realization(const Schedule& schedule, std::uint64_t seed);

/// Positions of the cells where the mode differs from the previous cell.
std::vector<double> switch_positions(const std::vector<double>& positions, const std::vector<AntennaMode>& mode);

}  // namespace pawas
