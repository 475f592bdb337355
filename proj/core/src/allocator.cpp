// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------

#include "pawas/allocator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <fmt/format.h>

#include "pawas/errors.hpp"

namespace pawas {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Candidate modes in tie-break order.
constexpr std::array<AntennaMode, 2> kModes{AntennaMode::Mimo, AntennaMode::Simo};

double trapezoid_mean(const std::vector<double>& x, const std::vector<double>& f) {
    if (x.size() < 2) return f.empty() ? 0.0 : f.front();
    double acc = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) acc += 0.5 * (x[k] - x[k - 1]) * (f[k] + f[k - 1]);
    return acc / (x.back() - x.front());
}

// Inverse of delay_insensitive_share, which is piecewise linear and increasing.
double share_inverse(double share, const QueueModel& q, double lbar) {
    const double knee = lbar * q.service_rate;
    const double p_on = q.busy_probability;
    if (share <= (1.0 - p_on) * knee) return share / (1.0 - p_on);
    return share + p_on * knee;
}

struct Problem {
    CorridorGeometry geom;
    TrafficPattern pattern;
    SolverConfig cfg;
    CapacityModel model;
    std::vector<ChannelState> states;
    std::vector<double> weights;
    QueueModel queue;
    double target = 0.0;  // L-bar lambda_i T/2

    double share(double c) const { return delay_insensitive_share(c, queue, pattern.mean_packet_bits_per_hz); }

    Trace waterfill(double eta) const {
        Trace t;
        t.resize(states.size());
        for (std::size_t k = 0; k < states.size(); ++k) t.set(k, waterfill_power(states[k], eta, cfg, model));
        return t;
    }

    double balance(const Trace& t) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) acc += weights[k] * share(t.capacity[k]);
        return acc - target;
    }
};

Problem make_problem(const CorridorGeometry& geom, const TrafficPattern& pattern, const SolverConfig& cfg,
                     const CapacityModel& model) {
    geom.validate();
    pattern.validate();
    cfg.validate();
    Problem p{geom, pattern, cfg, model, channel_states(geom), geom.time_weights(), required_rate(pattern), 0.0};
    p.target = pattern.mean_packet_bits_per_hz * pattern.lambda_insensitive * 0.5 * geom.period_s();
    return p;
}

Schedule make_schedule(const Problem& p, TrafficClass cls) {
    Schedule s;
    s.traffic_class = cls;
    s.positions = p.geom.positions();
    s.busy.resize(p.states.size());
    s.idle.resize(p.states.size());
    s.bound.resize(p.states.size());
    s.busy_probability = p.queue.busy_probability;
    s.required_capacity = p.queue.required_capacity;
    return s;
}

Trace inversion_trace(const Problem& p) {
    Trace t;
    t.resize(p.states.size());
    const double c = p.queue.required_capacity;
    if (c <= 0.0) return t;

    std::optional<std::size_t> first;
    std::size_t last = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < p.states.size(); ++k) {
        try {
            t.set(k, channel_inversion(p.states[k], c, p.cfg, p.model));
        } catch (const InfeasibleError& e) {
            if (!first) first = k;
            last = k;
            worst = std::max(worst, e.shortfall());
        }
    }
    if (first) {
        const double x0 = p.states[*first].position_m;
        const double x1 = p.states[last].position_m;
        throw InfeasibleError(fmt::format("C* = {:.6g} bit/s/Hz exceeds the power cap on x in [{:.6g}, {:.6g}] m", c,
                                          x0, x1),
                              worst, x0, x1);
    }
    return t;
}

// Balance with every cell at the capacity its best mode reaches at the cap.
// This is the supremum of the balance over eta.
void check_waterfilling_feasible(const Problem& p) {
    if (!std::isfinite(p.cfg.p_max)) return;
    Trace t;
    t.resize(p.states.size());
    for (std::size_t k = 0; k < p.states.size(); ++k) {
        PointAllocation best;
        for (AntennaMode m : kModes) {
            if (!p.cfg.allows(m)) continue;
            const double cap = p.cfg.power_cap(m);
            const double c = p.model.capacity(p.states[k], cap, m);
            if (c > best.capacity) best = {cap, m, c};
        }
        t.set(k, best);
    }
    const double r = p.balance(t);
    if (r < 0.0) {
        throw InfeasibleError(fmt::format("rate demand exceeds what the power cap can deliver by {:.6g} bit/Hz", -r),
                              -r, p.states.front().position_m, p.states.back().position_m);
    }
}

// Across a mode switch the point-wise capacity jumps, so the balance may step
// over the target between two adjacent eta values. Starting from the lower
// solution, take the jumping cells one at a time and close the remaining gap
// inside the cell that crosses it, at the cheaper of its two modes.
std::size_t repair_boundary(const Problem& p, const Trace& lo, const Trace& hi, Trace& out) {
    out = lo;
    double r = p.balance(lo);
    for (std::size_t k = 0; k < lo.size(); ++k) {
        const double jump = hi.capacity[k] - lo.capacity[k];
        if (!(std::abs(jump) > 1e-9 * std::max(1.0, hi.capacity[k]))) continue;
        const double w = p.weights[k];
        const double r_after = r + w * (p.share(hi.capacity[k]) - p.share(lo.capacity[k]));
        if (r_after < 0.0) {
            out.set(k, hi.at(k));
            r = r_after;
            continue;
        }

        PointAllocation best = hi.at(k);
        auto consider = [&](AntennaMode mode, double share) {
            if (mode == AntennaMode::Off || share < 0.0) return;
            const double c = share_inverse(share, p.queue, p.pattern.mean_packet_bits_per_hz);
            double power = 0.0;
            try {
                power = p.model.inverse(p.states[k], c, mode);
            } catch (const SingularChannelError&) {
                return;
            }
            if (power > p.cfg.power_cap(mode)) return;
            if (power < best.power) best = {power, mode, p.model.capacity(p.states[k], power, mode)};
        };
        consider(lo.mode[k], p.share(lo.capacity[k]) - r / w);
        consider(hi.mode[k], p.share(hi.capacity[k]) - r_after / w);
        out.set(k, best);
        return k;
    }
    // No single jump found; fall back to the feasible side.
    out = hi;
    return lo.size();
}

Schedule solve_waterfilling(const Problem& p, TrafficClass cls) {
    Schedule s = make_schedule(p, cls);
    if (p.queue.required_capacity > 0.0) s.bound = inversion_trace(p);

    if (p.target <= 0.0) {
        s.rate_residual = 0.0;
    } else {
        check_waterfilling_feasible(p);
        const EtaSolution sol = solve_eta([&](double eta) { return p.balance(p.waterfill(eta)); }, p.cfg);
        s.eta = sol.eta;
        s.iterations = sol.iterations;
        s.idle = p.waterfill(sol.eta);
        if (sol.discontinuous) {
            Trace repaired;
            const std::size_t k = repair_boundary(p, p.waterfill(sol.eta_lower), s.idle, repaired);
            if (k < repaired.size()) {
                s.idle = std::move(repaired);
                s.boundary_cell = k;
            }
        }
        s.rate_residual = p.balance(s.idle);
    }

    // Busy state: the bound when it needs more capacity than the idle schedule gives.
    for (std::size_t k = 0; k < s.size(); ++k) {
        const bool use_bound = s.bound.capacity[k] > s.idle.capacity[k];
        s.busy.set(k, use_bound ? s.bound.at(k) : s.idle.at(k));
    }
    s.avg_power = average_power(s);
    return s;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(epsilon > 0.0)) throw ValidationError("epsilon", "must be > 0");
    if (!(p_max > 0.0)) throw ValidationError("p_max", "must be > 0");
    if (!(eta_expand_factor > 1.0)) throw ValidationError("eta_expand_factor", "must be > 1");
    if (max_bisection_iters < 1) throw ValidationError("max_bisection_iters", "must be >= 1");
    if (!(eta_initial > 0.0) || !std::isfinite(eta_initial)) throw ValidationError("eta_initial", "must be > 0");
    if (!(bracket_rel_tol > 0.0 && bracket_rel_tol < 1.0)) throw ValidationError("bracket_rel_tol", "must be in (0, 1)");
}

double SolverConfig::power_cap(AntennaMode mode) const {
    switch (mode) {
        case AntennaMode::Mimo: return 2.0 * p_max;
        case AntennaMode::Simo: return p_max;
        case AntennaMode::Off: return 0.0;
    }
    return 0.0;
}

bool SolverConfig::allows(AntennaMode mode) const {
    switch (mode_policy) {
        case ModePolicy::Adaptive: return true;
        case ModePolicy::MimoOnly: return mode != AntennaMode::Simo;
        case ModePolicy::SimoOnly: return mode != AntennaMode::Mimo;
    }
    return true;
}

double CapacityModel::offset(AntennaMode mode) const {
    switch (mode) {
        case AntennaMode::Mimo: return mimo_offset;
        case AntennaMode::Simo: return simo_offset;
        case AntennaMode::Off: return 0.0;
    }
    return 0.0;
}

double CapacityModel::capacity(const ChannelState& state, double power, AntennaMode mode) const {
    if (mode == AntennaMode::Off) return 0.0;
    const double o = offset(mode);
    const double c = pawas::capacity(state, power, mode);
    return o == 0.0 ? c : std::max(0.0, c + o);
}

double CapacityModel::inverse(const ChannelState& state, double c, AntennaMode mode) const {
    if (!(c >= 0.0)) throw DomainError("capacity must be nonnegative, got " + std::to_string(c));
    if (c == 0.0 || mode == AntennaMode::Off) return 0.0;
    return invert_capacity(state, c - offset(mode), mode);
}

void Trace::resize(std::size_t n) {
    power.assign(n, 0.0);
    mode.assign(n, AntennaMode::Off);
    capacity.assign(n, 0.0);
}

void Trace::set(std::size_t k, const PointAllocation& a) {
    power[k] = a.power;
    mode[k] = a.mode;
    capacity[k] = a.capacity;
}

double stationary_power(const ChannelState& state, double eta, AntennaMode mode) {
    switch (mode) {
        case AntennaMode::Simo: return eta - 1.0 / state.alpha2;
        case AntennaMode::Mimo: {
            // Larger root eta - (b - sqrt(D))/(2a) with D = b^2 - 4a + 4 eta^2 a^2,
            // rewritten so that it stays accurate when a is tiny next to b^2.
            const double a = state.mimo_quadratic();
            const double b = state.mimo_linear();
            const double ea = eta * a;
            const double d = std::max(0.0, b * b - 4.0 * a + 4.0 * ea * ea);
            return eta - 2.0 * (1.0 - eta * ea) / (b + std::sqrt(d));
        }
        case AntennaMode::Off: return 0.0;
    }
    return 0.0;
}

PointAllocation waterfill_power(const ChannelState& state, double eta, const SolverConfig& cfg,
                                const CapacityModel& model) {
    PointAllocation best;
    double best_cost = 0.0;
    for (AntennaMode mode : kModes) {
        if (!cfg.allows(mode)) continue;
        const double p = std::min(stationary_power(state, eta, mode), cfg.power_cap(mode));
        if (!(p > 0.0)) continue;
        const double c = model.capacity(state, p, mode);
        const double cost = p - eta * kLn2 * c;
        if (cost < best_cost) {
            best_cost = cost;
            best = {p, mode, c};
        }
    }
    return best;
}

PointAllocation channel_inversion(const ChannelState& state, double c, const SolverConfig& cfg,
                                  const CapacityModel& model) {
    if (!(c >= 0.0)) throw DomainError("capacity must be nonnegative, got " + std::to_string(c));
    if (c == 0.0) return {};

    std::array<PointAllocation, 2> options{};
    std::size_t n = 0;
    for (AntennaMode mode : kModes) {
        if (!cfg.allows(mode)) continue;
        double p = kInf;
        try {
            p = model.inverse(state, c, mode);
        } catch (const SingularChannelError&) {
        }
        options[n++] = {p, mode, c};
    }
    std::stable_sort(options.begin(), options.begin() + static_cast<std::ptrdiff_t>(n),
                     [](const PointAllocation& l, const PointAllocation& r) { return l.power < r.power; });

    double excess = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        const double cap = cfg.power_cap(options[i].mode);
        if (options[i].power <= cap) return options[i];
        excess = std::min(excess, options[i].power - cap);
    }
    const double x = state.position_m;
    throw InfeasibleError(fmt::format("C* = {:.6g} bit/s/Hz exceeds the power cap at x = {:.6g} m", c, x), excess, x, x);
}

EtaSolution solve_eta(const std::function<double(double)>& balance, const SolverConfig& cfg) {
    cfg.validate();
    EtaSolution s;
    double lo = 0.0;
    double r_lo = -kInf;
    double hi = cfg.eta_initial;
    double r_hi = balance(hi);
    int iters = 1;

    while (!(r_hi >= 0.0)) {
        if (iters >= cfg.max_bisection_iters || !std::isfinite(hi))
            throw ConvergenceError("water level bracket did not close", lo, hi);
        lo = hi;
        r_lo = r_hi;
        hi *= cfg.eta_expand_factor;
        r_hi = balance(hi);
        ++iters;
    }

    // Keep hi on the feasible side. Stop once the residual is within epsilon
    // and the bracket is negligible (or the residual is already negligible).
    for (;;) {
        const bool narrow = hi - lo <= cfg.bracket_rel_tol * hi;
        if (r_hi < cfg.epsilon && (narrow || r_hi <= 1e-9 * cfg.epsilon)) break;
        if (narrow) {
            s.discontinuous = true;
            break;
        }
        if (iters >= cfg.max_bisection_iters)
            throw ConvergenceError(fmt::format("bisection stopped after {} iterations with residual {:.6g}", iters, r_hi),
                                   lo, hi);
        const double mid = 0.5 * (lo + hi);
        const double r = balance(mid);
        ++iters;
        if (r >= 0.0) {
            hi = mid;
            r_hi = r;
        } else {
            lo = mid;
            r_lo = r;
        }
    }
    s.eta = hi;
    s.residual = r_hi;
    s.eta_lower = lo;
    s.residual_lower = r_lo;
    s.iterations = iters;
    return s;
}

double delay_insensitive_share(double capacity, const QueueModel& queue, double mean_packet_bits_per_hz) {
    const double knee = mean_packet_bits_per_hz * queue.service_rate;
    return capacity - queue.busy_probability * std::min(knee, capacity);
}

Schedule allocate_delay_insensitive(const CorridorGeometry& geom, const TrafficPattern& pattern,
                                    const SolverConfig& cfg, const CapacityModel& model) {
    if (pattern.lambda_sensitive > 0.0)
        throw ValidationError("lambda_s", "delay-insensitive allocation needs lambda_s = 0");
    Schedule s = solve_waterfilling(make_problem(geom, pattern, cfg, model), TrafficClass::DelayInsensitive);
    s.busy = s.idle;
    return s;
}

Schedule allocate_delay_sensitive(const CorridorGeometry& geom, const TrafficPattern& pattern,
                                  const SolverConfig& cfg, const CapacityModel& model) {
    if (pattern.lambda_insensitive > 0.0)
        throw ValidationError("lambda_i", "delay-sensitive allocation needs lambda_i = 0");
    if (!(pattern.lambda_sensitive > 0.0))
        throw ValidationError("lambda_s", "delay-sensitive allocation needs lambda_s > 0");
    const Problem p = make_problem(geom, pattern, cfg, model);
    Schedule s = make_schedule(p, TrafficClass::DelaySensitive);
    s.bound = inversion_trace(p);
    s.busy = s.bound;
    s.avg_power = average_power(s);
    return s;
}

Schedule allocate_hybrid(const CorridorGeometry& geom, const TrafficPattern& pattern, const SolverConfig& cfg,
                         const CapacityModel& model) {
    switch (pattern.classify()) {
        case TrafficClass::DelayInsensitive: return allocate_delay_insensitive(geom, pattern, cfg, model);
        case TrafficClass::DelaySensitive: return allocate_delay_sensitive(geom, pattern, cfg, model);
        case TrafficClass::Hybrid: break;
    }
    return solve_waterfilling(make_problem(geom, pattern, cfg, model), TrafficClass::Hybrid);
}

Schedule allocate(const CorridorGeometry& geom, const TrafficPattern& pattern, const SolverConfig& cfg,
                  const CapacityModel& model) {
    return allocate_hybrid(geom, pattern, cfg, model);
}

Schedule even_power_baseline(const CorridorGeometry& geom, const TrafficPattern& pattern, AntennaMode mode,
                             const SolverConfig& cfg, const CapacityModel& model) {
    if (pattern.lambda_sensitive > 0.0)
        throw ValidationError("lambda_s", "the even-power baseline covers delay-insensitive traffic only");
    if (mode == AntennaMode::Off) throw ValidationError("mode", "the even-power baseline needs MIMO or SIMO");
    const Problem p = make_problem(geom, pattern, cfg, model);
    Schedule s = make_schedule(p, TrafficClass::DelayInsensitive);

    auto trace_at = [&](double power) {
        Trace t;
        t.resize(p.states.size());
        for (std::size_t k = 0; k < p.states.size(); ++k) {
            const double c = power > 0.0 ? p.model.capacity(p.states[k], power, mode) : 0.0;
            t.set(k, power > 0.0 ? PointAllocation{power, mode, c} : PointAllocation{});
        }
        return t;
    };

    double power = 0.0;
    if (p.target > 0.0) {
        const double cap = cfg.power_cap(mode);
        if (std::isfinite(cap) && p.balance(trace_at(cap)) < 0.0) {
            const double r = p.balance(trace_at(cap));
            throw InfeasibleError(fmt::format("even {} power needs more than the cap", to_string(mode)), -r,
                                  p.states.front().position_m, p.states.back().position_m);
        }
        // Balance is increasing in the constant power level, so eta's bracketing applies as is.
        SolverConfig c = cfg;
        c.max_bisection_iters = std::max(cfg.max_bisection_iters, 400);
        const EtaSolution sol = solve_eta([&](double q) { return p.balance(trace_at(std::min(q, cap))); }, c);
        power = std::min(sol.eta, cap);
        s.iterations = sol.iterations;
    }
    s.idle = trace_at(power);
    s.busy = s.idle;
    s.rate_residual = p.balance(s.idle);
    s.avg_power = average_power(s);
    return s;
}

double average_power(const Schedule& schedule) {
    const double p_on = schedule.busy_probability;
    const auto& x = schedule.positions;
    const double idle = trapezoid_mean(x, schedule.idle.power);
    const double busy = p_on > 0.0 ? trapezoid_mean(x, schedule.busy.power) : 0.0;
    return (1.0 - p_on) * idle + p_on * busy;
}

Trace sample_realization(const Schedule& schedule, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution busy(std::clamp(schedule.busy_probability, 0.0, 1.0));
    Trace t;
    t.resize(schedule.size());
    for (std::size_t k = 0; k < schedule.size(); ++k) t.set(k, busy(rng) ? schedule.busy.at(k) : schedule.idle.at(k));
    return t;
}

std::vector<double> switch_positions(const std::vector<double>& positions, const std::vector<AntennaMode>& mode) {
    std::vector<double> out;
    for (std::size_t k = 1; k < mode.size() && k < positions.size(); ++k)
        if (mode[k] != mode[k - 1]) out.push_back(positions[k]);
    return out;
}

}  // namespace pawas
