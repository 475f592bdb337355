// SPDX-License-Identifier: Apache-2.0
//
// pawas: joint power allocation and antenna selection for rail corridors
// ------------------------------------------------------------------------
//
// Command line front end.
//
//   pawas schedule   <cfg>                               CSV + JSON report
//   pawas sweep      <cfg> --param p_max --values 110,111  summary CSV
//   pawas verify     <cfg> --check kkt                   pass/fail report
//   pawas thresholds <cfg>                               per-point thresholds
//
// Output goes to --out, else to $PAWAS_OUTPUT_DIR/<label>..., else stdout.
// Exit status: 0 ok, 1 failed check, 2 bad input, 3 infeasible, 4 no convergence.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pawas/errors.hpp"
#include "pawas/scenario.hpp"

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config;
    std::optional<std::size_t> grid;
    std::optional<std::uint64_t> seed;
    std::string out;
};

pawas::Scenario load(const Common& c) {
    pawas::Scenario s = pawas::load_scenario(c.config);
    if (c.grid) s.geometry.grid_points = *c.grid;
    if (c.seed) s.seed = *c.seed;
    s.validate();
    return s;
}

// Explicit --out wins; otherwise PAWAS_OUTPUT_DIR/<default_name>; otherwise stdout.
std::optional<fs::path> destination(const Common& c, const std::string& default_name) {
    if (!c.out.empty()) return fs::path(c.out);
    if (const char* dir = std::getenv("PAWAS_OUTPUT_DIR"); dir && *dir) return fs::path(dir) / default_name;
    return std::nullopt;
}

void emit(const std::optional<fs::path>& path, const std::string& text) {
    if (!path) {
        std::cout << text;
        return;
    }
    if (path->has_parent_path()) fs::create_directories(path->parent_path());
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw pawas::Error("cannot write " + path->string());
    f << text;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> out;
    std::string item;
    for (std::size_t i = 0; i <= list.size(); ++i) {
        if (i == list.size() || list[i] == ',') {
            if (!item.empty()) {
                try {
                    std::size_t used = 0;
                    out.push_back(std::stod(item, &used));
                    if (used != item.size()) throw std::invalid_argument(item);
                } catch (const std::exception&) {
                    throw pawas::ValidationError("values", "not a number: '" + item + "'");
                }
            }
            item.clear();
        } else if (list[i] != ' ') {
            item += list[i];
        }
    }
    return out;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("config", c.config, "scenario file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--grid", c.grid, "override the number of grid points")->check(CLI::Range(2, 10'000'000));
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--out", c.out, "output file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Power allocation and antenna selection for a two-RAU rail corridor"};
    app.set_version_flag("--version", std::string(PAWAS_VERSION_STRING));
    app.require_subcommand(1);

    Common common;
    auto* schedule = app.add_subcommand("schedule", "solve a scenario and write the per-position schedule");
    add_common(schedule, common);
    std::string report_path;
    schedule->add_option("--report", report_path, "also write the JSON summary here");

    auto* sweep = app.add_subcommand("sweep", "solve a scenario for a list of parameter values");
    add_common(sweep, common);
    std::string param;
    std::string values;
    std::vector<std::string> baselines;
    sweep->add_option("--param", param, "lambda_i | lambda_s | tau_max | p_max | m")->required();
    sweep->add_option("--values", values, "comma separated list (tau_max in ms, p_max in dB)")->required();
    sweep->add_option("--baseline", baselines, "mimo | simo | even_mimo | even_simo")->delimiter(',');

    auto* verify = app.add_subcommand("verify", "run a verification check");
    add_common(verify, common);
    pawas::VerifyOptions vopt;
    verify->add_option("--check", vopt.check, "mm1 | kkt | nakagami-theorem | brute-force")->required();
    verify->add_option("--lambda", vopt.lambda, "arrival rate for mm1");
    verify->add_option("--mu", vopt.mu, "service rate for mm1");
    verify->add_option("--m", vopt.m, "Nakagami shape to report");
    verify->add_option("--packets", vopt.packets, "packets for mm1");
    verify->add_option("--samples", vopt.mc_samples, "Monte-Carlo repetitions");

    auto* thresholds = app.add_subcommand("thresholds", "dump channel gains and selection thresholds");
    add_common(thresholds, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*schedule) {
            const auto s = load(common);
            const auto report = pawas::run_schedule(s);
            emit(destination(common, s.label + ".csv"), pawas::schedule_csv(report));
            const std::string json = pawas::report_json(report);
            if (!report_path.empty()) {
                emit(fs::path(report_path), json);
            } else if (const auto dest = destination(common, s.label + ".csv")) {
                fs::path p = *dest;
                emit(p.replace_extension(".json"), json);
            } else {
                std::cerr << json;
            }
        } else if (*sweep) {
            const auto s = load(common);
            const auto p = pawas::parse_sweep_param(param);
            const auto rows = pawas::sweep(s, p, parse_values(values), baselines);
            emit(destination(common, s.label + "_sweep_" + param + ".csv"), pawas::sweep_csv(p, rows, baselines));
        } else if (*verify) {
            const auto s = load(common);
            vopt.seed = common.seed;
            const auto r = pawas::verify(s, vopt);
            std::string text;
            for (const auto& line : r.lines) text += line + "\n";
            emit(destination(common, s.label + "_verify_" + vopt.check + ".txt"), text);
            return r.pass ? 0 : 1;
        } else if (*thresholds) {
            const auto s = load(common);
            emit(destination(common, s.label + "_thresholds.csv"), pawas::thresholds_csv(s));
        }
    } catch (const pawas::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const pawas::ConvergenceError& e) {
        std::cerr << fmt::format("no convergence: {} (eta bracket [{:.6g}, {:.6g}])\n", e.what(), e.eta_low(),
                                 e.eta_high());
        return 4;
    } catch (const pawas::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const pawas::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const pawas::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
