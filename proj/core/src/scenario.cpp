// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------

#include "pawas/scenario.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pawas/errors.hpp"
#include "pawas/oracles.hpp"
#include "pawas/units.hpp"

#ifndef PAWAS_VERSION
#define PAWAS_VERSION "0.0.0"
#endif

namespace pawas {

namespace {

namespace pt = boost::property_tree;

double parse_number(const std::string& field, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || *end != '\0' || errno == ERANGE || std::isnan(v))
        throw ValidationError(field, "not a number: '" + text + "'");
    return v;
}

std::size_t parse_count(const std::string& field, const std::string& text) {
    const double v = parse_number(field, text);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) throw ValidationError(field, "must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

bool filesystem_safe(const std::string& s) {
    return !s.empty() && s != "." && s != ".." && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
               c == '.';
    });
}

std::string db_text(double linear) { return fmt::format("{:.15g}", units::to_db(linear)); }

std::string join(const std::vector<double>& xs, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += fmt::format("{:.15g}", xs[i]);
    }
    return out;
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

}  // namespace

void Scenario::validate() const {
    if (!filesystem_safe(label)) throw ValidationError("label", "must be nonempty and use only [A-Za-z0-9._-]");
    geometry.validate();
    traffic.validate();
    fading.validate();
    solver.validate();
}

Scenario parse_scenario(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParseError(e.message(), static_cast<int>(e.line()));
    }

    Scenario s;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ValidationError(section, "key outside of any section");
        for (const auto& [key, node] : body) {
            const std::string field = section + "." + key;
            const std::string v = node.get_value<std::string>();
            if (section == "scenario") {
                if (key == "label") s.label = v;
                else if (key == "seed") s.seed = parse_count(field, v);
                else throw ValidationError(field, "unknown key");
            } else if (section == "geometry") {
                auto& g = s.geometry;
                if (key == "d_r_m") g.mr_spacing_m = parse_number(field, v);
                else if (key == "d_h_m") g.rau_spacing_m = parse_number(field, v);
                else if (key == "d_v_m") g.track_offset_m = parse_number(field, v);
                else if (key == "speed_kmh") g.speed_mps = units::kmh_to_mps(parse_number(field, v));
                else if (key == "pathloss_exponent") g.pathloss_exponent = parse_number(field, v);
                else if (key == "grid_points") g.grid_points = parse_count(field, v);
                else throw ValidationError(field, "unknown key");
            } else if (section == "traffic") {
                auto& t = s.traffic;
                if (key == "lambda_i") t.lambda_insensitive = parse_number(field, v);
                else if (key == "lambda_s") t.lambda_sensitive = parse_number(field, v);
                else if (key == "tau_max_ms") t.tau_max_s = units::ms_to_s(parse_number(field, v));
                else if (key == "l_bar") t.mean_packet_bits_per_hz = parse_number(field, v);
                else throw ValidationError(field, "unknown key");
            } else if (section == "fading") {
                if (key == "kind") {
                    if (v == "sparse") s.fading.kind = FadingModel::Kind::Sparse;
                    else if (v == "nakagami") s.fading.kind = FadingModel::Kind::Nakagami;
                    else throw ValidationError(field, "expected sparse or nakagami, got '" + v + "'");
                } else if (key == "m") {
                    s.fading.m = parse_number(field, v);
                } else {
                    throw ValidationError(field, "unknown key");
                }
            } else if (section == "solver") {
                auto& c = s.solver;
                if (key == "epsilon") c.epsilon = parse_number(field, v);
                else if (key == "p_max_db") c.p_max = units::from_db(parse_number(field, v));
                else if (key == "eta_expand_factor") c.eta_expand_factor = parse_number(field, v);
                else if (key == "max_bisection_iters") c.max_bisection_iters = static_cast<int>(parse_count(field, v));
                else throw ValidationError(field, "unknown key");
            } else {
                throw ValidationError(section, "unknown section");
            }
        }
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string(), 0);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

std::string save_scenario(const Scenario& s) {
    const auto& g = s.geometry;
    const auto& t = s.traffic;
    const auto& c = s.solver;
    std::string out;
    out += fmt::format("[scenario]\nlabel = {}\nseed = {}\n\n", s.label, s.seed);
    out += fmt::format("[geometry]\nd_r_m = {}\nd_h_m = {}\nd_v_m = {}\nspeed_kmh = {}\npathloss_exponent = {}\n"
                       "grid_points = {}\n\n",
                       g.mr_spacing_m, g.rau_spacing_m, g.track_offset_m, units::mps_to_kmh(g.speed_mps),
                       g.pathloss_exponent, g.grid_points);
    out += fmt::format("[traffic]\nlambda_i = {}\nlambda_s = {}\ntau_max_ms = {}\nl_bar = {}\n\n", t.lambda_insensitive,
                       t.lambda_sensitive, units::s_to_ms(t.tau_max_s), t.mean_packet_bits_per_hz);
    out += "[fading]\n";
    if (s.fading.kind == FadingModel::Kind::Nakagami) out += fmt::format("kind = nakagami\nm = {}\n\n", s.fading.m);
    else out += "kind = sparse\n\n";
    out += fmt::format("[solver]\nepsilon = {}\np_max_db = {}\neta_expand_factor = {}\nmax_bisection_iters = {}\n",
                       c.epsilon, units::to_db(c.p_max), c.eta_expand_factor, c.max_bisection_iters);
    return out;
}

std::uint64_t scenario_hash(const Scenario& s) {
    const auto& g = s.geometry;
    const auto& t = s.traffic;
    const auto& c = s.solver;
    const bool nakagami = s.fading.kind == FadingModel::Kind::Nakagami;
    const std::string canon = fmt::format(
        "g:{:.15g},{:.15g},{:.15g},{:.15g},{:.15g},{}|t:{:.15g},{:.15g},{:.15g},{:.15g}|f:{},{:.15g}|"
        "s:{:.15g},{:.15g},{:.15g},{},{:.15g},{:.15g},{}",
        g.mr_spacing_m, g.rau_spacing_m, g.track_offset_m, g.speed_mps, g.pathloss_exponent, g.grid_points,
        t.lambda_insensitive, t.lambda_sensitive, t.tau_max_s, t.mean_packet_bits_per_hz, nakagami ? "nakagami" : "sparse",
        nakagami ? s.fading.m : 0.0, c.epsilon, c.p_max, c.eta_expand_factor, c.max_bisection_iters, c.eta_initial,
        c.bracket_rel_tol, static_cast<int>(c.mode_policy));
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

Schedule run_allocator(const Scenario& s) {
    s.validate();
    return allocate(s.geometry, s.traffic, s.solver, capacity_model(s.fading));
}

ScheduleReport run_schedule(const Scenario& s) {
    ScheduleReport r;
    r.schedule = run_allocator(s);
    r.avg_power_db = units::to_db(r.schedule.avg_power);
    r.switch_positions = switch_positions(r.schedule.positions, r.schedule.busy.mode);
    if (r.schedule.traffic_class == TrafficClass::Hybrid)
        r.idle_switch_positions = switch_positions(r.schedule.positions, r.schedule.idle.mode);
    r.scenario_hash = scenario_hash(s);
    r.seed = s.seed;
    r.version = PAWAS_VERSION;
    return r;
}

std::string schedule_csv(const ScheduleReport& report) {
    const Schedule& s = report.schedule;
    const bool hybrid = s.traffic_class == TrafficClass::Hybrid;
    std::string out = "x_m,power_total_dbw,mode,capacity_bps_hz";
    if (hybrid) out += ",power_idle_dbw,power_busy_bound_dbw";
    out += '\n';
    for (std::size_t k = 0; k < s.size(); ++k) {
        out += fmt::format("{:.15g},{},{},{:.15g}", s.positions[k], db_text(s.busy.power[k]), to_string(s.busy.mode[k]),
                           s.busy.capacity[k]);
        if (hybrid) out += fmt::format(",{},{}", db_text(s.idle.power[k]), db_text(s.bound.power[k]));
        out += '\n';
    }
    return out;
}

std::string report_json(const ScheduleReport& report) {
    const Schedule& s = report.schedule;
    nlohmann::json j;
    j["traffic_class"] = std::string(to_string(s.traffic_class));
    j["avg_power"] = s.avg_power;
    j["avg_power_db"] = finite_or_null(report.avg_power_db);
    j["switch_positions"] = report.switch_positions;
    if (s.traffic_class == TrafficClass::Hybrid) j["idle_switch_positions"] = report.idle_switch_positions;
    j["feasible"] = report.feasible;
    j["eta"] = s.eta ? nlohmann::json(*s.eta) : nlohmann::json(nullptr);
    j["rate_residual"] = s.rate_residual ? nlohmann::json(*s.rate_residual) : nlohmann::json(nullptr);
    j["boundary_cell"] = s.boundary_cell ? nlohmann::json(*s.boundary_cell) : nlohmann::json(nullptr);
    j["busy_probability"] = s.busy_probability;
    j["required_capacity"] = s.required_capacity;
    j["grid_points"] = s.size();
    j["provenance"] = {{"scenario_hash", hex64(report.scenario_hash)}, {"seed", report.seed}, {"version", report.version}};
    return j.dump(2) + "\n";
}

std::string thresholds_csv(const Scenario& s) {
    s.validate();
    std::string out = "x_m,alpha1,alpha2,beta,zeta_p,zeta_p_db,zeta_c\n";
    for (const ChannelState& st : channel_states(s.geometry)) {
        double zp = std::nan("");
        double zc = std::nan("");
        try {
            const auto t = thresholds(st);
            zp = t.power;
            zc = t.capacity;
        } catch (const SingularChannelError&) {
        }
        out += fmt::format("{:.15g},{:.15g},{:.15g},{:.15g},{:.15g},{:.15g},{:.15g}\n", st.position_m, st.alpha1,
                           st.alpha2, st.beta, zp, units::to_db(zp), zc);
    }
    return out;
}

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "lambda_i") return SweepParam::LambdaI;
    if (name == "lambda_s") return SweepParam::LambdaS;
    if (name == "tau_max") return SweepParam::TauMax;
    if (name == "p_max") return SweepParam::PMax;
    if (name == "m") return SweepParam::M;
    throw ValidationError("param", "unknown sweep parameter '" + name + "'");
}

std::string to_string(SweepParam p) {
    switch (p) {
        case SweepParam::LambdaI: return "lambda_i";
        case SweepParam::LambdaS: return "lambda_s";
        case SweepParam::TauMax: return "tau_max";
        case SweepParam::PMax: return "p_max";
        case SweepParam::M: return "m";
    }
    return "?";
}

Scenario with_parameter(Scenario s, SweepParam p, double value) {
    switch (p) {
        case SweepParam::LambdaI: s.traffic.lambda_insensitive = value; break;
        case SweepParam::LambdaS: s.traffic.lambda_sensitive = value; break;
        case SweepParam::TauMax: s.traffic.tau_max_s = units::ms_to_s(value); break;
        case SweepParam::PMax: s.solver.p_max = units::from_db(value); break;
        case SweepParam::M: s.fading = FadingModel::nakagami(value); break;
    }
    return s;
}

std::vector<SweepRow> sweep(const Scenario& s, SweepParam p, const std::vector<double>& values,
                            const std::vector<std::string>& baselines) {
    for (const auto& b : baselines)
        if (b != "mimo" && b != "simo" && b != "even_mimo" && b != "even_simo")
            throw ValidationError("baseline", "unknown baseline '" + b + "'");

    std::vector<SweepRow> rows;
    for (double v : values) {
        const Scenario sc = with_parameter(s, p, v);
        SweepRow row;
        row.value = v;
        try {
            const Schedule sched = run_allocator(sc);
            row.feasible = true;
            row.avg_power_db = units::to_db(sched.avg_power);
            row.eta = sched.eta;
            row.switch_positions = switch_positions(sched.positions, sched.busy.mode);
        } catch (const InfeasibleError&) {
            row.feasible = false;
        }
        const CapacityModel model = capacity_model(sc.fading);
        for (const auto& b : baselines) {
            std::optional<double> db;
            try {
                Schedule base;
                if (b == "mimo" || b == "simo") {
                    Scenario forced = sc;
                    forced.solver.mode_policy = b == "mimo" ? ModePolicy::MimoOnly : ModePolicy::SimoOnly;
                    base = run_allocator(forced);
                } else {
                    const AntennaMode mode = b == "even_mimo" ? AntennaMode::Mimo : AntennaMode::Simo;
                    base = even_power_baseline(sc.geometry, sc.traffic, mode, sc.solver, model);
                }
                db = units::to_db(base.avg_power);
            } catch (const InfeasibleError&) {
            } catch (const ValidationError&) {
            }
            row.baseline_db.push_back(db);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string sweep_csv(SweepParam p, const std::vector<SweepRow>& rows, const std::vector<std::string>& baselines) {
    std::string out = "param,value,avg_power_db,feasible,eta,switch_positions";
    for (const auto& b : baselines) out += "," + b + "_db";
    out += '\n';
    for (const auto& r : rows) {
        out += fmt::format("{},{:.15g},{},{},{},{}", to_string(p), r.value,
                           r.feasible ? fmt::format("{:.15g}", r.avg_power_db) : std::string(),
                           r.feasible ? "true" : "false", r.eta ? fmt::format("{:.15g}", *r.eta) : std::string(),
                           join(r.switch_positions, ";"));
        for (const auto& b : r.baseline_db) out += "," + (b ? fmt::format("{:.15g}", *b) : std::string());
        out += '\n';
    }
    return out;
}

VerifyResult verify(const Scenario& s, const VerifyOptions& opt) {
    s.validate();
    VerifyResult r;
    const std::uint64_t seed = opt.seed.value_or(s.seed);

    if (opt.check == "mm1") {
        const QueueModel q = required_rate(s.traffic);
        const double lambda = opt.lambda.value_or(s.traffic.lambda_sensitive);
        const double mu = opt.mu.value_or(q.service_rate);
        const double expected = mm1_delay(lambda, mu);
        const double simulated = simulate_mm1(lambda, mu, opt.packets, seed);
        const double rel = std::abs(simulated - expected) / expected;
        r.pass = rel <= 0.05;
        r.lines.push_back(fmt::format("mm1 lambda={:.6g} mu={:.6g} packets={} seed={}", lambda, mu, opt.packets, seed));
        r.lines.push_back(fmt::format("  simulated {:.6g} ms, expected {:.6g} ms, relative error {:.4g} (tolerance 0.05)",
                                      units::s_to_ms(simulated), units::s_to_ms(expected), rel));
    } else if (opt.check == "kkt") {
        const Schedule sched = run_allocator(s);
        const KktReport k = kkt_report(sched, s.geometry, s.solver);
        r.pass = k.max_residual < 1e-6 && k.rate_residual < s.solver.epsilon;
        r.lines.push_back(fmt::format("kkt eta={:.10g} checked_points={}", *sched.eta, k.checked_points));
        r.lines.push_back(fmt::format("  max stationarity residual {:.3e} (tolerance 1e-6)", k.max_residual));
        r.lines.push_back(fmt::format("  rate balance residual {:.3e} bit/Hz (tolerance {:.3g})", k.rate_residual,
                                      s.solver.epsilon));
    } else if (opt.check == "nakagami-theorem") {
        std::vector<double> ladder{0.5, 1.0, 2.0, 3.5};
        const double power = units::from_db(opt.mc_power_db);
        std::vector<TheoremErrors> errs;
        r.lines.push_back(fmt::format("nakagami-theorem power={:.6g} dB samples={} seed={}", opt.mc_power_db,
                                      opt.mc_samples, seed));
        if (opt.m && std::find(ladder.begin(), ladder.end(), *opt.m) == ladder.end()) {
            const auto e = theorem_errors(s.geometry, power, *opt.m, opt.mc_samples, seed);
            r.lines.push_back(fmt::format("  m={:<4g} Err_m={:.5f} Err_c={:.5f} (not part of the trend)", *opt.m,
                                          e.max_relative, e.cumulative_relative));
        }
        for (double m : ladder) {
            errs.push_back(theorem_errors(s.geometry, power, m, opt.mc_samples, seed));
            const auto& e = errs.back();
            r.lines.push_back(fmt::format("  m={:<4g} Err_m={:.5f} Err_c={:.5f} worst at x={:.4g} m ({}){}", m,
                                          e.max_relative, e.cumulative_relative, e.worst_position_m,
                                          to_string(e.worst_mode), opt.m && *opt.m == m ? "  <-- requested" : ""));
        }
        bool dec_m = true;
        bool dec_c = true;
        for (std::size_t i = 1; i < errs.size(); ++i) {
            dec_m = dec_m && errs[i].max_relative < errs[i - 1].max_relative;
            dec_c = dec_c && errs[i].cumulative_relative < errs[i - 1].cumulative_relative;
        }
        r.pass = dec_m && dec_c;
        r.lines.push_back(fmt::format("  Err_m strictly decreasing: {}; Err_c strictly decreasing: {}", dec_m, dec_c));
    } else if (opt.check == "brute-force") {
        CorridorGeometry g = s.geometry;
        g.grid_points = 16;
        TrafficPattern t = s.traffic;
        t.lambda_sensitive = 0.0;
        if (!(t.lambda_insensitive > 0.0)) throw ValidationError("lambda_i", "brute-force check needs lambda_i > 0");
        const double pawas = allocate_delay_insensitive(g, t, s.solver).avg_power;
        const double brute = brute_force_delay_insensitive(g, t, s.solver).avg_power;
        const double rel = std::abs(pawas - brute) / brute;
        r.pass = rel <= 0.01;
        r.lines.push_back(fmt::format("brute-force grid=16 lambda_i={:.6g}", t.lambda_insensitive));
        r.lines.push_back(fmt::format("  solver {:.6f} dB, lattice search {:.6f} dB, relative gap {:.4g} (tolerance 0.01)",
                                      units::to_db(pawas), units::to_db(brute), rel));
    } else {
        throw ValidationError("check", "unknown check '" + opt.check + "'");
    }
    r.lines.push_back(r.pass ? "PASS" : "FAIL");
    return r;
}

}  // namespace pawas
