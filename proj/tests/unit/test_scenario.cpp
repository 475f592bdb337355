// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "pawas/errors.hpp"
#include "pawas/scenario.hpp"
#include "pawas/units.hpp"

using namespace pawas;

namespace {

const std::filesystem::path kDir = PAWAS_SCENARIO_DIR;

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("bundled scenario carries the corridor settings") {
    const Scenario s = load_scenario(kDir / "fig5b.cfg");
    CHECK(s.label == "fig5b");
    CHECK(s.geometry.mr_spacing_m == 400.0);
    CHECK(s.geometry.rau_spacing_m == 1000.0);
    CHECK(s.geometry.track_offset_m == 100.0);
    CHECK(s.geometry.speed_mps == doctest::Approx(500.0 / 3.6));
    CHECK(s.geometry.pathloss_exponent == 3.8);
    CHECK(s.traffic.mean_packet_bits_per_hz == 0.01);
    CHECK(s.traffic.lambda_sensitive == 800.0);
    CHECK(s.traffic.tau_max_s == doctest::Approx(0.010));
    CHECK(std::isinf(s.solver.p_max));
    CHECK(s.fading.kind == FadingModel::Kind::Sparse);
}

TEST_CASE("every bundled scenario loads") {
    std::size_t n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(kDir)) {
        if (entry.path().extension() != ".cfg") continue;
        CAPTURE(entry.path().string());
        const Scenario s = load_scenario(entry.path());
        CHECK(s.label == entry.path().stem().string());
        ++n;
    }
    CHECK(n == 20);
}

TEST_CASE("round trip through text") {
    Scenario s = load_scenario(kDir / "fig8c.cfg");
    s.solver.p_max = units::from_db(111.25);
    s.geometry.grid_points = 321;
    const Scenario t = parse_scenario(save_scenario(s));
    CHECK(scenario_hash(t) == scenario_hash(s));
    CHECK(t.label == s.label);
    CHECK(t.seed == s.seed);
    CHECK(t.fading.kind == FadingModel::Kind::Nakagami);
    CHECK(t.fading.m == s.fading.m);
    CHECK(t.solver.p_max == doctest::Approx(s.solver.p_max).epsilon(1e-14));
    CHECK(t.geometry.speed_mps == doctest::Approx(s.geometry.speed_mps).epsilon(1e-15));
    CHECK(t.traffic.tau_max_s == doctest::Approx(s.traffic.tau_max_s).epsilon(1e-15));
    CHECK(t.geometry.grid_points == 321);
    CHECK(save_scenario(t) == save_scenario(s));
}

TEST_CASE("scenario hash tracks semantic fields only") {
    const Scenario base = load_scenario(kDir / "fig7c.cfg");
    Scenario s = base;
    s.label = "renamed";
    s.seed = 99;
    CHECK(scenario_hash(s) == scenario_hash(base));

    std::vector<Scenario> variants(8, base);
    variants[0].geometry.mr_spacing_m = 401.0;
    variants[1].geometry.grid_points = 999;
    variants[2].traffic.lambda_insensitive = 801.0;
    variants[3].traffic.tau_max_s = 0.011;
    variants[4].fading = FadingModel::nakagami(2.0);
    variants[5].solver.epsilon = 1e-4;
    variants[6].solver.p_max = 1e11;
    variants[7].traffic.mean_packet_bits_per_hz = 0.02;
    for (const auto& v : variants) CHECK(scenario_hash(v) != scenario_hash(base));
}

TEST_CASE("parse errors and validation") {
    SUBCASE("syntax error carries the line") {
        try {
            parse_scenario("[geometry]\nd_r_m = 400\n[traffic\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("missing delay bound") {
        try {
            parse_scenario("[traffic]\nlambda_s = 800\n");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.field() == "tau_max");
        }
    }
    SUBCASE("unknown key") {
        try {
            parse_scenario("[geometry]\nd_x_m = 4\n");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.field() == "geometry.d_x_m");
        }
    }
    SUBCASE("bad number") {
        CHECK_THROWS_AS(parse_scenario("[traffic]\nlambda_i = lots\n"), ValidationError);
        CHECK_THROWS_AS(parse_scenario("[geometry]\ngrid_points = 10.5\n"), ValidationError);
    }
    SUBCASE("bad label and fading") {
        CHECK_THROWS_AS(parse_scenario("[scenario]\nlabel = a/b\n"), ValidationError);
        CHECK_THROWS_AS(parse_scenario("[fading]\nkind = rician\n"), ValidationError);
        CHECK_THROWS_AS(parse_scenario("[fading]\nkind = nakagami\nm = 0.2\n"), ValidationError);
    }
    SUBCASE("defaults fill the rest") {
        const Scenario s = parse_scenario("[traffic]\nlambda_i = 100\n");
        CHECK(s.geometry.grid_points == 1000);
        CHECK(s.traffic.lambda_insensitive == 100.0);
    }
    CHECK_THROWS_AS(load_scenario(kDir / "does-not-exist.cfg"), ParseError);
}

TEST_CASE("schedule CSV for a delay-sensitive scenario") {
    const Scenario s = load_scenario(kDir / "fig5b.cfg");
    const ScheduleReport r = run_schedule(s);
    const auto rows = lines(schedule_csv(r));
    REQUIRE(rows.size() == 1001);
    CHECK(rows[0] == "x_m,power_total_dbw,mode,capacity_bps_hz");
    // Mode flips once, MIMO to SIMO, just past the capacity-threshold crossing.
    REQUIRE(r.switch_positions.size() == 1);
    CHECK(r.switch_positions[0] == doctest::Approx(223.7).epsilon(1e-3));
    CHECK(split(rows[1], ',')[2] == "MIMO");
    CHECK(split(rows[1000], ',')[2] == "SIMO");
    CHECK(r.avg_power_db == doctest::Approx(10.0 * std::log10(r.schedule.avg_power)));

    // Values survive the declared units.
    for (std::size_t k = 1; k < rows.size(); k += 97) {
        const auto f = split(rows[k], ',');
        const double p = units::from_db(std::stod(f[1]));
        CHECK(p == doctest::Approx(r.schedule.busy.power[k - 1]).epsilon(1e-9));
        CHECK(std::stod(f[3]) == doctest::Approx(r.schedule.busy.capacity[k - 1]).epsilon(1e-9));
        CHECK(std::stod(f[0]) == doctest::Approx(r.schedule.positions[k - 1]).epsilon(1e-12));
    }
}

TEST_CASE("schedule CSV for the all-MIMO demand") {
    const ScheduleReport r = run_schedule(load_scenario(kDir / "fig5d.cfg"));
    const auto rows = lines(schedule_csv(r));
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(split(rows[k], ',')[2] == "MIMO");
    CHECK(r.switch_positions.empty());
}

TEST_CASE("hybrid CSV carries the idle and bound columns") {
    Scenario s = load_scenario(kDir / "fig7c.cfg");
    s.geometry.grid_points = 101;
    const ScheduleReport r = run_schedule(s);
    const auto rows = lines(schedule_csv(r));
    CHECK(rows[0] == "x_m,power_total_dbw,mode,capacity_bps_hz,power_idle_dbw,power_busy_bound_dbw");
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto f = split(rows[k], ',');
        REQUIRE(f.size() == 6);
        CHECK(std::stod(f[1]) == doctest::Approx(std::max(std::stod(f[4]), std::stod(f[5]))).epsilon(1e-12));
    }
    CHECK(schedule_csv(run_schedule(s)) == schedule_csv(r));
}

TEST_CASE("JSON report") {
    Scenario s = load_scenario(kDir / "fig7c.cfg");
    s.geometry.grid_points = 101;
    const std::string j = report_json(run_schedule(s));
    CHECK(j.find("\"avg_power_db\"") != std::string::npos);
    CHECK(j.find("\"switch_positions\"") != std::string::npos);
    CHECK(j.find("\"idle_switch_positions\"") != std::string::npos);
    CHECK(j.find("\"scenario_hash\"") != std::string::npos);
    CHECK(j.find("\"feasible\": true") != std::string::npos);
    CHECK(j.find("\"version\"") != std::string::npos);
}

TEST_CASE("thresholds CSV") {
    Scenario s = load_scenario(kDir / "fig3a.cfg");
    s.geometry.grid_points = 3;
    const auto rows = lines(thresholds_csv(s));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "x_m,alpha1,alpha2,beta,zeta_p,zeta_p_db,zeta_c");
    const auto last = split(rows[3], ',');
    CHECK(std::stod(last[0]) == 500.0);
    CHECK(std::stod(last[6]) == doctest::Approx(11.838052679306252).epsilon(1e-12));
    CHECK(split(rows[1], ',')[5] == "-inf");
}

TEST_CASE("sweeps") {
    Scenario s = load_scenario(kDir / "fig9d.cfg");
    s.geometry.grid_points = 200;
    SUBCASE("p_max cliff") {
        const auto rows = sweep(s, SweepParam::PMax, {130.0, 112.0, 111.0, 110.5, 110.0, 109.0});
        CHECK(rows.front().feasible);
        CHECK_FALSE(rows.back().feasible);
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].feasible) CHECK(rows[i].avg_power_db >= rows[i - 1].avg_power_db - 1e-12);
        const auto csv = lines(sweep_csv(SweepParam::PMax, rows));
        CHECK(csv[0] == "param,value,avg_power_db,feasible,eta,switch_positions");
        CHECK(csv.back() == "p_max,109,,false,,");
    }
    SUBCASE("lambda_i with baselines") {
        Scenario di = load_scenario(kDir / "fig6a.cfg");
        di.geometry.grid_points = 200;
        const std::vector<std::string> b{"mimo", "simo", "even_mimo", "even_simo"};
        const auto rows = sweep(di, SweepParam::LambdaI, {100.0, 700.0, 1300.0}, b);
        for (const auto& r : rows) {
            REQUIRE(r.baseline_db.size() == 4);
            for (const auto& v : r.baseline_db) {
                REQUIRE(v.has_value());
                CHECK(r.avg_power_db <= *v + 1e-12);
            }
        }
        CHECK(lines(sweep_csv(SweepParam::LambdaI, rows, b))[0] ==
              "param,value,avg_power_db,feasible,eta,switch_positions,mimo_db,simo_db,even_mimo_db,even_simo_db");
    }
    SUBCASE("even baselines are blank for delay-sensitive load") {
        const auto rows = sweep(s, SweepParam::LambdaS, {300.0}, {"even_simo", "simo"});
        CHECK_FALSE(rows[0].baseline_db[0].has_value());
        CHECK(rows[0].baseline_db[1].has_value());
    }
    SUBCASE("other parameters") {
        Scenario ds = load_scenario(kDir / "fig5b.cfg");
        ds.geometry.grid_points = 200;
        const auto tau = sweep(ds, SweepParam::TauMax, {3.0, 10.0});
        CHECK(tau[0].avg_power_db > tau[1].avg_power_db);
        const auto m = sweep(s, SweepParam::M, {0.5, 3.5});
        CHECK(m[0].avg_power_db > m[1].avg_power_db);
        CHECK(sweep(s, SweepParam::LambdaI, {}).empty());
        CHECK(lines(sweep_csv(SweepParam::LambdaI, {})).size() == 1);
    }
    CHECK_THROWS_AS(parse_sweep_param("speed"), ValidationError);
    CHECK_THROWS_AS(sweep(s, SweepParam::PMax, {110.0}, {"greedy"}), ValidationError);
}

TEST_CASE("verify checks") {
    Scenario s = load_scenario(kDir / "fig7c.cfg");
    VerifyOptions o;
    SUBCASE("mm1") {
        o.check = "mm1";
        o.lambda = 800.0;
        o.mu = 900.0;
        o.packets = 200'000;
        CHECK(verify(s, o).pass);
    }
    SUBCASE("kkt") {
        o.check = "kkt";
        CHECK(verify(s, o).pass);
    }
    SUBCASE("brute force") {
        o.check = "brute-force";
        CHECK(verify(s, o).pass);
    }
    SUBCASE("unknown") {
        o.check = "nope";
        CHECK_THROWS_AS(verify(s, o), ValidationError);
    }
}
