// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------

#include "pawas/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pawas/errors.hpp"

namespace pawas {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_power(double power) {
    if (!(power >= 0.0)) throw DomainError("transmit power must be nonnegative, got " + std::to_string(power));
}

// Rank-one test relative to the scale of the gains; roundoff alone leaves ~1e-16.
bool is_singular(const ChannelState& s) {
    return !(s.gram_determinant() > 1e-13 * s.alpha1 * s.alpha2);
}

}  // namespace

std::string_view to_string(AntennaMode mode) {
    switch (mode) {
        case AntennaMode::Mimo: return "MIMO";
        case AntennaMode::Simo: return "SIMO";
        case AntennaMode::Off: return "OFF";
    }
    return "?";
}

void CorridorGeometry::validate() const {
    if (!(mr_spacing_m > 0.0)) throw ValidationError("d_r", "must be > 0");
    if (!(rau_spacing_m > mr_spacing_m)) throw ValidationError("d_h", "must exceed d_r");
    if (!(track_offset_m > 0.0)) throw ValidationError("d_v", "must be > 0");
    if (!(speed_mps > 0.0)) throw ValidationError("speed", "must be > 0");
    if (!(pathloss_exponent > 2.0)) throw ValidationError("pathloss_exponent", "must be > 2");
    if (grid_points < 2) throw ValidationError("grid_points", "must be >= 2");
}

std::vector<double> CorridorGeometry::positions() const {
    std::vector<double> xs(grid_points);
    const double span = half_span_m();
    const double n = static_cast<double>(grid_points - 1);
    for (std::size_t k = 0; k < grid_points; ++k) xs[k] = span * static_cast<double>(k) / n;
    xs.back() = span;
    return xs;
}

std::vector<double> CorridorGeometry::time_weights() const {
    const double dt = cell_m() / speed_mps;
    std::vector<double> w(grid_points, dt);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

std::array<double, 4> link_distances(const CorridorGeometry& geom, double x) {
    // Horizontal offsets: MR1 trails MR2 by d_r, RAU1 sits at -d_h/2 and RAU2 at +d_h/2.
    const double near = 0.5 * (geom.rau_spacing_m - geom.mr_spacing_m);
    const double far = 0.5 * (geom.rau_spacing_m + geom.mr_spacing_m);
    const double dv = geom.track_offset_m;
    return {std::hypot(dv, near + x),   // d11
            std::hypot(dv, far - x),    // d12
            std::hypot(dv, far + x),    // d21
            std::hypot(dv, near - x)};  // d22
}

ChannelState channel_state(const CorridorGeometry& geom, double x) {
    if (!(x >= 0.0 && x <= geom.half_span_m()))
        throw DomainError("position " + std::to_string(x) + " m is outside [0, d_h/2]");

    const auto d = link_distances(geom, x);
    ChannelState s;
    s.position_m = x;
    std::array<double, 4> gain{};
    for (std::size_t k = 0; k < 4; ++k) {
        gain[k] = std::pow(d[k], -geom.pathloss_exponent);
        s.amplitude[k] = std::sqrt(gain[k]);
    }
    const auto& h = s.amplitude;
    s.alpha1 = gain[0] + gain[2];
    s.alpha2 = gain[1] + gain[3];
    s.beta = h[0] * h[1] + h[2] * h[3];
    return s;
}

std::vector<ChannelState> channel_states(const CorridorGeometry& geom) {
    std::vector<ChannelState> out;
    out.reserve(geom.grid_points);
    for (double x : geom.positions()) out.push_back(channel_state(geom, x));
    return out;
}

double capacity_mimo(const ChannelState& state, double power) {
    require_power(power);
    const double snr = (state.mimo_quadratic() * power + state.mimo_linear()) * power;
    return std::log1p(snr) / kLn2;
}

double capacity_simo(const ChannelState& state, double power) {
    require_power(power);
    return std::log1p(power * state.alpha2) / kLn2;
}

double capacity(const ChannelState& state, double power, AntennaMode mode) {
    switch (mode) {
        case AntennaMode::Mimo: return capacity_mimo(state, power);
        case AntennaMode::Simo: return capacity_simo(state, power);
        case AntennaMode::Off: return 0.0;
    }
    return 0.0;
}

double effective_gain(const ChannelState& state, double power) {
    require_power(power);
    return std::max(state.mimo_quadratic() * power + state.mimo_linear(), state.alpha2);
}

SelectionThresholds thresholds(const ChannelState& state) {
    if (is_singular(state)) throw SingularChannelError("rank-one channel: alpha1*alpha2 == beta^2");
    SelectionThresholds t;
    t.power = std::max(0.0, 2.0 * (state.alpha2 - state.alpha1) / state.gram_determinant());
    t.capacity = std::log1p(state.alpha2 * t.power) / kLn2;
    return t;
}

AntennaMode select_mode(const ChannelState& state, double power) {
    return power >= thresholds(state).power ? AntennaMode::Mimo : AntennaMode::Simo;
}

double max_capacity_threshold(const CorridorGeometry& geom) {
    geom.validate();
    auto zeta_c = [&](double x) { return thresholds(channel_state(geom, x)).capacity; };

    const double x_near = 0.5 * (geom.rau_spacing_m - geom.mr_spacing_m);
    const double x_end = geom.half_span_m();
    double best = std::max(zeta_c(x_near), zeta_c(x_end));

    // The interior maximum sits close to, but not exactly on, x_near.
    double lo = std::max(0.0, x_near - 0.25 * geom.mr_spacing_m);
    double hi = std::min(x_end, x_near + 0.25 * geom.mr_spacing_m);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = zeta_c(a);
    double fb = zeta_c(b);
    while (hi - lo > 1e-9 * geom.rau_spacing_m) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = zeta_c(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = zeta_c(a);
        }
    }
    return std::max({best, fa, fb});
}

double invert_capacity(const ChannelState& state, double c, AntennaMode mode) {
    if (!(c >= 0.0)) throw DomainError("capacity must be nonnegative, got " + std::to_string(c));
    if (c == 0.0 || mode == AntennaMode::Off) return 0.0;
    const double k = std::expm1(c * kLn2);  // 2^c - 1
    if (mode == AntennaMode::Simo) return k / state.alpha2;
    if (is_singular(state)) throw SingularChannelError("rank-one channel: MIMO inversion undefined");
    // a P^2 + b P - k = 0, written in the cancellation-free form of the positive root.
    const double a = state.mimo_quadratic();
    const double b = state.mimo_linear();
    return 2.0 * k / (b + std::sqrt(b * b + 4.0 * a * k));
}

}  // namespace pawas
