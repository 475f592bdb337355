// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------

#include "pawas/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pawas/errors.hpp"

namespace pawas {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Least power with logdet_capacity >= c, by bisection on the forward map only.
double invert_by_bisection(const ChannelState& state, double c, AntennaMode mode) {
    if (c <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (logdet_capacity(state, hi, mode) < c) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) return kInf;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (logdet_capacity(state, mid, mode) >= c) hi = mid;
        else lo = mid;
    }
    return hi;
}

}  // namespace

double stationarity_residual(const ChannelState& state, double power, AntennaMode mode, double eta) {
    switch (mode) {
        case AntennaMode::Simo: return 1.0 - eta * state.alpha2 / (1.0 + state.alpha2 * power);
        case AntennaMode::Mimo: {
            const double a = state.mimo_quadratic();
            const double b = state.mimo_linear();
            return 1.0 - eta * (b + 2.0 * a * power) / (1.0 + (b + a * power) * power);
        }
        case AntennaMode::Off: return 0.0;
    }
    return 0.0;
}

KktReport kkt_report(const Schedule& schedule, const CorridorGeometry& geom, const SolverConfig& cfg) {
    if (!schedule.eta) throw ValidationError("eta", "schedule has no waterfilling part");
    const auto states = channel_states(geom);
    if (states.size() != schedule.size()) throw ValidationError("grid_points", "schedule and geometry disagree");

    KktReport r;
    r.rate_residual = std::abs(schedule.rate_residual.value_or(0.0));
    const Trace& t = schedule.idle;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (schedule.boundary_cell && *schedule.boundary_cell == k) continue;
        const double p = t.power[k];
        if (!(p > 0.0) || p >= cfg.power_cap(t.mode[k])) continue;
        const double res = std::abs(stationarity_residual(states[k], p, t.mode[k], *schedule.eta));
        ++r.checked_points;
        if (res > r.max_residual || !r.worst_cell) {
            r.max_residual = std::max(r.max_residual, res);
            r.worst_cell = k;
        }
    }
    return r;
}

double logdet_capacity(const ChannelState& state, double power, AntennaMode mode) {
    const auto& h = state.amplitude;  // {h11, h12, h21, h22}
    if (mode == AntennaMode::Simo) return std::log2(1.0 + power * (h[1] * h[1] + h[3] * h[3]));
    if (mode == AntennaMode::Off) return 0.0;
    // G = I + (P/2) H^T H with columns of H indexed by RAU.
    const double s = 0.5 * power;
    const double g11 = 1.0 + s * (h[0] * h[0] + h[2] * h[2]);
    const double g22 = 1.0 + s * (h[1] * h[1] + h[3] * h[3]);
    const double g12 = s * (h[0] * h[1] + h[2] * h[3]);
    return std::log2(g11 * g22 - g12 * g12);
}

BruteForceResult brute_force_delay_insensitive(const CorridorGeometry& geom, const TrafficPattern& pattern,
                                               const SolverConfig& cfg, double capacity_step) {
    geom.validate();
    pattern.validate();
    cfg.validate();
    if (pattern.lambda_sensitive > 0.0) throw ValidationError("lambda_s", "brute force covers lambda_s = 0 only");
    if (!(capacity_step > 0.0)) throw ValidationError("capacity_step", "must be > 0");

    const auto states = channel_states(geom);
    const auto w = geom.time_weights();
    const std::size_t n = states.size();
    const double half_dt = 0.5 * geom.cell_m() / geom.speed_mps;
    const double target = pattern.mean_packet_bits_per_hz * pattern.lambda_insensitive * 0.5 * geom.period_s();

    // Rate in lattice units: cell k contributes units[k] * level.
    std::vector<std::size_t> units(n);
    for (std::size_t k = 0; k < n; ++k) units[k] = static_cast<std::size_t>(std::lround(w[k] / half_dt));
    const auto need = static_cast<std::size_t>(std::ceil(target / (half_dt * capacity_step) - 1e-9));

    // Cheapest mode per level, as long as the level could still be part of an
    // optimal solution (costlier than a uniform feasible choice is pointless).
    auto level_cost = [&](std::size_t k, std::size_t level, AntennaMode* mode) {
        const double c = static_cast<double>(level) * capacity_step;
        double best = kInf;
        for (AntennaMode m : {AntennaMode::Mimo, AntennaMode::Simo}) {
            if (!cfg.allows(m)) continue;
            const double p = invert_by_bisection(states[k], c, m);
            if (p <= cfg.power_cap(m) && p < best) {
                best = p;
                if (mode) *mode = m;
            }
        }
        return best;
    };

    std::size_t total_units = 0;
    for (auto u : units) total_units += u;
    const std::size_t uniform = (need + total_units - 1) / total_units;
    double bound = 0.0;
    for (std::size_t k = 0; k < n; ++k) bound += w[k] * level_cost(k, uniform, nullptr);
    if (!std::isfinite(bound)) bound = kInf;

    std::vector<std::vector<double>> cost(n);
    std::vector<std::vector<AntennaMode>> modes(n);
    for (std::size_t k = 0; k < n; ++k) {
        cost[k].push_back(0.0);
        modes[k].push_back(AntennaMode::Off);
        const std::size_t max_level = (need + units[k] - 1) / units[k];
        for (std::size_t level = 1; level <= max_level; ++level) {
            AntennaMode m = AntennaMode::Off;
            const double p = level_cost(k, level, &m);
            if (!std::isfinite(p) || w[k] * p > bound) break;
            cost[k].push_back(w[k] * p);
            modes[k].push_back(m);
        }
    }

    // dp[r]: least cost over the cells seen so far delivering min(rate, need) = r.
    std::vector<double> dp(need + 1, kInf);
    dp[0] = 0.0;
    std::vector<std::vector<std::size_t>> choice(n, std::vector<std::size_t>(need + 1, 0));
    std::vector<double> next(need + 1);
    for (std::size_t k = 0; k < n; ++k) {
        std::fill(next.begin(), next.end(), kInf);
        for (std::size_t r = 0; r <= need; ++r) {
            if (!std::isfinite(dp[r])) continue;
            for (std::size_t level = 0; level < cost[k].size(); ++level) {
                const std::size_t r2 = std::min(need, r + units[k] * level);
                const double v = dp[r] + cost[k][level];
                if (v < next[r2]) {
                    next[r2] = v;
                    choice[k][r2] = r;  // predecessor state
                }
            }
        }
        dp.swap(next);
    }
    if (!std::isfinite(dp[need]))
        throw InfeasibleError("no lattice allocation meets the rate integral", target, states.front().position_m,
                              states.back().position_m);

    BruteForceResult out;
    out.power.assign(n, 0.0);
    out.mode.assign(n, AntennaMode::Off);
    out.capacity.assign(n, 0.0);
    std::size_t r = need;
    double weight_sum = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t prev = choice[k][r];
        // Recover the level from the predecessor; at the saturated state pick the cheapest level that fits.
        std::size_t level = 0;
        for (std::size_t l = 0; l < cost[k].size(); ++l) {
            if (std::min(need, prev + units[k] * l) == r) {
                level = l;
                break;
            }
        }
        out.capacity[k] = static_cast<double>(level) * capacity_step;
        out.mode[k] = modes[k][level];
        out.power[k] = cost[k][level] / w[k];
        r = prev;
        weight_sum += w[k];
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += w[k] * out.power[k];
        out.rate_integral += w[k] * out.capacity[k];
    }
    out.avg_power = acc / weight_sum;
    return out;
}

}  // namespace pawas
