// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------

#include "pawas/nakagami.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pawas/errors.hpp"

namespace pawas {

namespace {

constexpr double kLn2 = std::numbers::ln2;

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_a), static_cast<std::uint32_t>(stream_b)};
    return std::mt19937_64(seq);
}

MonteCarloEstimate estimate(const ChannelState& state, double power, AntennaMode mode, double m,
                            std::size_t n_samples, std::mt19937_64& rng) {
    if (!(m >= 0.5)) throw DomainError("Nakagami m must be >= 0.5, got " + std::to_string(m));
    if (n_samples < 1000) throw DomainError("Monte-Carlo needs at least 1000 samples");
    if (!(power >= 0.0)) throw DomainError("transmit power must be nonnegative");

    std::gamma_distribution<double> gain(m, 1.0 / m);
    const auto& h = state.amplitude;
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        double c = 0.0;
        if (mode == AntennaMode::Simo) {
            const double a2 = gain(rng) * h[1] * h[1] + gain(rng) * h[3] * h[3];
            c = std::log1p(power * a2) / kLn2;
        } else if (mode == AntennaMode::Mimo) {
            const double f11 = std::sqrt(gain(rng)) * h[0];
            const double f12 = std::sqrt(gain(rng)) * h[1];
            const double f21 = std::sqrt(gain(rng)) * h[2];
            const double f22 = std::sqrt(gain(rng)) * h[3];
            // det(I + P/2 H^T H) = 1 + P/2 tr(H^T H) + P^2/4 det(H)^2
            const double tr = f11 * f11 + f12 * f12 + f21 * f21 + f22 * f22;
            const double det = f11 * f22 - f12 * f21;
            c = std::log1p(0.5 * power * tr + 0.25 * power * power * det * det) / kLn2;
        }
        const double delta = c - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (c - mean);
    }
    MonteCarloEstimate e;
    e.mean = mean;
    e.samples = n_samples;
    e.std_error = std::sqrt(m2 / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples));
    return e;
}

}  // namespace

void FadingModel::validate() const {
    if (kind == Kind::Nakagami && !(m >= 0.5)) throw ValidationError("m", "must be >= 0.5");
}

double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma needs x > 0, got " + std::to_string(x));
    double acc = 0.0;
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // Bernoulli tail: -sum B_2k / (2k x^2k)
    const double tail =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
    return acc + std::log(x) - 0.5 / x - tail;
}

ErgodicOffset ergodic_offset(const FadingModel& fading) {
    fading.validate();
    if (fading.kind == FadingModel::Kind::Sparse) return {};
    return {(digamma(fading.m) - std::log(fading.m)) / kLn2};
}

CapacityModel capacity_model(const FadingModel& fading) {
    const ErgodicOffset o = ergodic_offset(fading);
    return {o.mimo(), o.simo()};
}

double ergodic_capacity(const ChannelState& state, double power, AntennaMode mode, const FadingModel& fading) {
    return capacity_model(fading).capacity(state, power, mode);
}

MonteCarloEstimate monte_carlo_estimate(const ChannelState& state, double power, AntennaMode mode, double m,
                                        std::size_t n_samples, std::uint64_t seed) {
    auto rng = make_engine(seed, 0, static_cast<std::uint64_t>(mode));
    return estimate(state, power, mode, m, n_samples, rng);
}

double monte_carlo_capacity(const ChannelState& state, double power, AntennaMode mode, double m,
                            std::size_t n_samples, std::uint64_t seed) {
    return monte_carlo_estimate(state, power, mode, m, n_samples, seed).mean;
}

TheoremErrors theorem_errors(const CorridorGeometry& geom, double power, double m, std::size_t n_samples,
                             std::uint64_t seed) {
    geom.validate();
    const FadingModel fading = FadingModel::nakagami(m);
    fading.validate();
    const auto states = channel_states(geom);
    const auto w = geom.time_weights();

    TheoremErrors out;
    constexpr AntennaMode modes[] = {AntennaMode::Simo, AntennaMode::Mimo};
    double sim_int[2] = {0.0, 0.0};
    double gap_int[2] = {0.0, 0.0};
    for (std::size_t k = 0; k < states.size(); ++k) {
        bool excluded = false;
        for (int i = 0; i < 2; ++i) {
            auto rng = make_engine(seed, k + 1, static_cast<std::uint64_t>(modes[i]));
            const double sim = estimate(states[k], power, modes[i], m, n_samples, rng).mean;
            const double theory = ergodic_capacity(states[k], power, modes[i], fading);
            sim_int[i] += w[k] * sim;
            gap_int[i] += w[k] * (sim - theory);
            if (!(sim > 0.0)) {
                excluded = true;
                continue;
            }
            const double rel = std::abs(sim - theory) / sim;
            if (rel > out.max_relative) {
                out.max_relative = rel;
                out.worst_position_m = states[k].position_m;
                out.worst_mode = modes[i];
            }
        }
        if (excluded) ++out.excluded_points;
    }
    for (int i = 0; i < 2; ++i)
        if (sim_int[i] > 0.0) out.cumulative_relative = std::max(out.cumulative_relative, std::abs(gap_int[i]) / sim_int[i]);
    return out;
}

Schedule allocate_hybrid_nakagami(const CorridorGeometry& geom, const TrafficPattern& pattern, double m,
                                  const SolverConfig& cfg) {
    return allocate_hybrid(geom, pattern, cfg, capacity_model(FadingModel::nakagami(m)));
}

}  // namespace pawas
