// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------
//
// Scenario files, schedule reports, parameter sweeps and verification checks.
//
// A scenario is an INI file:
//
//   [scenario]  label, seed
//   [geometry]  d_r_m, d_h_m, d_v_m, speed_kmh, pathloss_exponent, grid_points
//   [traffic]   lambda_i, lambda_s, tau_max_ms, l_bar
//   [fading]    kind = sparse | nakagami, m
//   [solver]    epsilon, p_max_db (or inf), eta_expand_factor, max_bisection_iters
//
// Rates are in 1/s, p_max in dB of the noise-normalized power per RAU.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pawas/allocator.hpp"
#include "pawas/nakagami.hpp"

namespace pawas {

struct Scenario {
    std::string label = "scenario";
    std::uint64_t seed = 1;
    CorridorGeometry geometry;
    TrafficPattern traffic;
    FadingModel fading;
    SolverConfig solver;

    void validate() const;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
std::string save_scenario(const Scenario& s);

/// FNV-1a over every semantic field; the label and seed do not count.
std::uint64_t scenario_hash(const Scenario& s);

/// Allocator matching the scenario's traffic class and fading.
Schedule run_allocator(const Scenario& s);

struct ScheduleReport {
    Schedule schedule;
    double avg_power_db = 0.0;
    std::vector<double> switch_positions;       ///< mode changes in the busy trace
    std::vector<double> idle_switch_positions;  ///< mode changes in the idle trace (hybrid only)
    bool feasible = true;
    std::uint64_t scenario_hash = 0;
    std::uint64_t seed = 0;
    std::string version;
};

ScheduleReport run_schedule(const Scenario& s);
std::string schedule_csv(const ScheduleReport& report);
std::string report_json(const ScheduleReport& report);

/// x, alpha1, alpha2, beta, zeta_P, zeta_P in dB, zeta_c per grid point.
std::string thresholds_csv(const Scenario& s);

enum class SweepParam { LambdaI, LambdaS, TauMax, PMax, M };

/// Throws ValidationError for names other than lambda_i, lambda_s, tau_max, p_max, m.
SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam p);

/// tau_max in ms and p_max in dB, as in scenario files.
Scenario with_parameter(Scenario s, SweepParam p, double value);

struct SweepRow {
    double value = 0.0;
    bool feasible = false;
    double avg_power_db = 0.0;
    std::optional<double> eta;
    std::vector<double> switch_positions;
    std::vector<std::optional<double>> baseline_db;  ///< one per requested baseline, empty when infeasible
};

/// Baselines: mimo, simo (forced-mode waterfilling), even_mimo, even_simo.
std::vector<SweepRow> sweep(const Scenario& s, SweepParam p, const std::vector<double>& values,
                            const std::vector<std::string>& baselines = {});
std::string sweep_csv(SweepParam p, const std::vector<SweepRow>& rows, const std::vector<std::string>& baselines = {});

struct VerifyOptions {
    std::string check;  ///< mm1, kkt, nakagami-theorem, brute-force
    std::optional<std::uint64_t> seed;
    std::optional<double> lambda;
    std::optional<double> mu;
    std::optional<double> m;
    std::size_t packets = 1'000'000;
    std::size_t mc_samples = 2000;
    double mc_power_db = 150.0;
};

struct VerifyResult {
    bool pass = false;
    std::vector<std::string> lines;
};

/// Throws ValidationError for an unknown check name.
VerifyResult verify(const Scenario& s, const VerifyOptions& opt);

}  // namespace pawas
