// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------
//
// Large-scale channel of a two-RAU / two-MR rail corridor.
//
// Coordinates: x is the offset of the MR pair's midpoint from the point
// halfway between RAU1 and RAU2, moving towards RAU2. Because the layout is
// periodic and symmetric, every quantity is evaluated on the half period
// x in [0, d_h/2]. RAU2 sits at x = d_h/2.
//
// Each link (MR_i, RAU_j) has power gain d_ij^(-iota), i.e. amplitude
// h_ij = d_ij^(-iota/2). Powers are linear and normalized by noise power.

#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace pawas {

/// Transmit-antenna selection. Numeric values follow the usual
/// Theta convention (MIMO = 0, SIMO = 1); OFF is an idle transmitter.
enum class AntennaMode : int { Mimo = 0, Simo = 1, Off = 2 };

std::string_view to_string(AntennaMode mode);

struct CorridorGeometry {
    double mr_spacing_m = 400.0;      ///< d_r, distance between the two MRs
    double rau_spacing_m = 1000.0;    ///< d_h, distance between adjacent RAUs
    double track_offset_m = 100.0;    ///< d_v, RAU distance from the track
    double speed_mps = 500.0 / 3.6;   ///< v
    double pathloss_exponent = 3.8;   ///< iota
    std::size_t grid_points = 1000;   ///< samples on [0, d_h/2], endpoints included

    /// Throws ValidationError naming the offending field.
    void validate() const;

    /// Time to traverse one RAU spacing, T = d_h / v.
    double period_s() const { return rau_spacing_m / speed_mps; }
    double half_span_m() const { return 0.5 * rau_spacing_m; }

    /// Uniform grid over [0, d_h/2].
    std::vector<double> positions() const;

    /// Grid spacing in meters.
    double cell_m() const { return half_span_m() / static_cast<double>(grid_points - 1); }

    /// Trapezoidal weights in seconds, so that sum(w_k f_k) ~ integral of f dt over [0, T/2].
    std::vector<double> time_weights() const;
};

/// Distances d_ij (meters) between MR_i and RAU_j, row-major {d11, d12, d21, d22}.
std::array<double, 4> link_distances(const CorridorGeometry& geom, double x);

struct ChannelState {
    double alpha1 = 0.0;  ///< h11^2 + h21^2, gain seen from RAU1
    double alpha2 = 0.0;  ///< h12^2 + h22^2, gain seen from RAU2
    double beta = 0.0;    ///< h11 h12 + h21 h22
    double position_m = 0.0;
    std::array<double, 4> amplitude{};  ///< {h11, h12, h21, h22}

    /// alpha1 alpha2 - beta^2, the Gram determinant of the two columns of H.
    double gram_determinant() const { return alpha1 * alpha2 - beta * beta; }
    /// Coefficient of P^2 inside the MIMO capacity.
    double mimo_quadratic() const { return 0.25 * gram_determinant(); }
    /// Coefficient of P inside the MIMO capacity.
    double mimo_linear() const { return 0.5 * (alpha1 + alpha2); }
};

/// Throws DomainError when x is outside [0, d_h/2].
ChannelState channel_state(const CorridorGeometry& geom, double x);

/// Channel state at every grid position.
std::vector<ChannelState> channel_states(const CorridorGeometry& geom);

/// log2(a P^2 + b P + 1), equal power split over both RAUs.
double capacity_mimo(const ChannelState& state, double power);

/// log2(1 + P alpha2), RAU2 only with maximal ratio combining.
double capacity_simo(const ChannelState& state, double power);

/// Capacity of the given mode. OFF yields 0.
double capacity(const ChannelState& state, double power, AntennaMode mode);

/// max(a P + b, alpha2): capacity under the better mode is log2(1 + Gamma P).
double effective_gain(const ChannelState& state, double power);

struct SelectionThresholds {
    double power = 0.0;     ///< zeta_P, MIMO is selected iff P >= zeta_P
    double capacity = 0.0;  ///< zeta_c, MIMO is selected iff C >= zeta_c
};

/// zeta_P = 2(alpha2 - alpha1)/(alpha1 alpha2 - beta^2), clamped at 0, and
/// zeta_c = log2(1 + alpha2 zeta_P). Throws SingularChannelError on a rank-one channel.
SelectionThresholds thresholds(const ChannelState& state);

/// Antenna selection at a given power: MIMO iff power >= zeta_P (ties go to MIMO).
AntennaMode select_mode(const ChannelState& state, double power);

/// Largest capacity threshold over the half period: a demand at or above it
/// selects MIMO everywhere. Evaluates the candidates x = (d_h - d_r)/2 and
/// x = d_h/2 and refines the interior local maximum next to the first one.
double max_capacity_threshold(const CorridorGeometry& geom);

/// Power that delivers capacity c in the given mode. SIMO is closed form,
/// MIMO takes the nonnegative root of a P^2 + b P + 1 = 2^c.
double invert_capacity(const ChannelState& state, double c, AntennaMode mode);

}  // namespace pawas
