// Copyright 2026 The omg-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "omg/circuit.h"
#include "omg/compiler.h"
#include "omg/error.h"
#include "omg/report.h"
#include "omg/simulator.h"
#include "omg/species.h"

namespace {

using omg::Error;
using omg::ErrorCode;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::CrystalTooLarge:
            return 4;
        case ErrorCode::InvalidCircuit:
        case ErrorCode::UnsupportedInstruction:
        case ErrorCode::IndexOutOfRange:
        case ErrorCode::MissingDuration:
            return 3;
        default:
            return 2;
    }
}

void write_text(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::ParseError, "cannot write " + path);
    }
    out << text;
}

struct Common {
    std::string species_file;
    std::string machine_path;

    omg::SpeciesDb species_db(omg::RunManifest *manifest) const {
        omg::SpeciesDb db;
        std::string path = species_file;
        if (path.empty()) {
            if (const char *env = std::getenv("OMG_SPECIES_FILE")) {
                path = env;
            }
        }
        if (!path.empty()) {
            db.apply_override_file(path);
            if (manifest) {
                manifest->add_input("species", path);
                manifest->species_overrides = db.overridden();
            }
        }
        return db;
    }

    omg::MachineConfig machine(omg::RunManifest *manifest) const {
        if (machine_path.empty()) {
            return omg::MachineConfig::defaults();
        }
        if (manifest) {
            manifest->add_input("machine", machine_path);
        }
        return omg::MachineConfig::load(machine_path);
    }
};

nlohmann::json read_json(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

std::string dump(const nlohmann::json &j) {
    return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"omg: trapped-ion o/m/g compiler and noise simulator"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--species-file", common.species_file, "species override file (default: $OMG_SPECIES_FILE)");

    auto *species_cmd = app.add_subcommand("species", "species database");
    species_cmd->require_subcommand(1);
    auto *species_list = species_cmd->add_subcommand("list", "print the species table");
    bool species_json = false;
    species_list->add_flag("--json", species_json, "print JSON instead of a table");

    std::string circuit_path, mode_name = "gmg", species_name = "43Ca+", schedule_out, timeline_out = "timeline.csv";
    bool no_boundary_direct = false;
    auto *compile_cmd = app.add_subcommand("compile", "lower a circuit to a primitive schedule");
    compile_cmd->add_option("circuit", circuit_path, "logical circuit JSON")->required();
    compile_cmd->add_option("--mode", mode_name, "mmm, gmg or mgm")->capture_default_str();
    compile_cmd->add_option("--species", species_name)->capture_default_str();
    compile_cmd->add_option("--machine", common.machine_path, "machine config JSON");
    compile_cmd->add_option("-o,--out", schedule_out, "schedule JSON path (default stdout)");
    compile_cmd->add_option("--timeline", timeline_out, "timeline CSV path")->capture_default_str();
    compile_cmd->add_flag("--no-boundary-direct", no_boundary_direct);

    std::string input_path, report_out, budget_out, ideal;
    uint64_t shots = 1000, seed = 0;
    unsigned workers = 1;
    bool exact = false, no_timestamp = false;
    auto *sim_cmd = app.add_subcommand("simulate", "Monte Carlo noise simulation");
    sim_cmd->add_option("input", input_path, "circuit or schedule JSON")->required();
    sim_cmd->add_option("--mode", mode_name, "mode when the input is a circuit")->capture_default_str();
    sim_cmd->add_option("--species", species_name)->capture_default_str();
    sim_cmd->add_option("--machine", common.machine_path, "machine config JSON");
    sim_cmd->add_option("--shots", shots)->capture_default_str();
    sim_cmd->add_option("--seed", seed)->capture_default_str();
    sim_cmd->add_option("--workers", workers)->capture_default_str();
    sim_cmd->add_option("--ideal", ideal, "score fidelity against this bitstring");
    sim_cmd->add_option("-o,--out", report_out, "report JSON path (default stdout)");
    sim_cmd->add_option("--budget-csv", budget_out, "write the budget table here");
    sim_cmd->add_flag("--exact", exact, "require the exact noiseless distribution");
    sim_cmd->add_flag("--no-timestamp", no_timestamp);
    sim_cmd->add_flag("--no-boundary-direct", no_boundary_direct);

    std::string table_out;
    auto *cmp_cmd = app.add_subcommand("compare-modes", "simulate a circuit under all three modes");
    cmp_cmd->add_option("circuit", circuit_path)->required();
    cmp_cmd->add_option("--species", species_name)->capture_default_str();
    cmp_cmd->add_option("--machine", common.machine_path, "machine config JSON");
    cmp_cmd->add_option("--shots", shots)->capture_default_str();
    cmp_cmd->add_option("--seed", seed)->capture_default_str();
    cmp_cmd->add_option("--workers", workers)->capture_default_str();
    cmp_cmd->add_option("-o,--out", report_out, "report JSON path");
    cmp_cmd->add_option("--table", table_out, "text table path (default stdout)");
    cmp_cmd->add_flag("--no-timestamp", no_timestamp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        omg::LowerOptions lower_options;
        lower_options.boundary_direct = !no_boundary_direct;

        if (species_list->parsed()) {
            omg::SpeciesDb db = common.species_db(nullptr);
            std::cout << (species_json ? db.to_json().dump(2) + "\n" : db.format_table());
            return 0;
        }

        if (compile_cmd->parsed()) {
            omg::SpeciesDb db = common.species_db(nullptr);
            omg::Mode mode = omg::Mode::parse(mode_name);
            const omg::SpeciesRecord &species = db.lookup(species_name);
            omg::MachineConfig cfg = common.machine(nullptr);
            omg::LogicalCircuit circuit = omg::LogicalCircuit::load(circuit_path);
            omg::Schedule schedule = omg::lower(circuit, mode, species, cfg, lower_options);
            write_text(schedule_out, dump(omg::schedule_to_json(schedule)));
            write_text(timeline_out, omg::timeline_csv(schedule));
            omg::ProtectionReport report = omg::validate_schedule(schedule);
            (schedule_out.empty() || schedule_out == "-" ? std::cerr : std::cout) << report.summary();
            return report.is_protected() && report.is_valid() ? 0 : 3;
        }

        omg::RunManifest manifest;
        manifest.seed = seed;
        manifest.shots = shots;
        if (!no_timestamp) {
            manifest.timestamp = omg::utc_timestamp();
        }
        if (shots == 0) {
            throw Error(ErrorCode::InvalidShots, "--shots must be >= 1");
        }
        omg::SimOptions options;
        options.workers = workers;

        if (sim_cmd->parsed()) {
            omg::SpeciesDb db = common.species_db(&manifest);
            omg::MachineConfig cfg = common.machine(&manifest);
            nlohmann::json input = read_json(input_path);
            manifest.add_input(input.contains("items") ? "schedule" : "circuit", input_path);
            omg::Schedule schedule;
            if (input.contains("items")) {
                schedule = omg::schedule_from_json(input);
            } else {
                omg::Mode mode = omg::Mode::parse(mode_name);
                const omg::SpeciesRecord &species = db.lookup(species_name);
                schedule = omg::lower(omg::LogicalCircuit::from_json(input), mode, species, cfg, lower_options);
            }
            manifest.mode = schedule.mode.name();
            manifest.species = schedule.species.name;
            std::optional<omg::OutcomeDistribution> distribution;
            if (exact) {
                distribution = omg::simulate_exact(schedule);
            } else if (schedule.n_data_ions <= omg::kMaxSimulatedQubits) {
                try {
                    distribution = omg::simulate_exact(schedule);
                } catch (const Error &e) {
                    if (e.code() != ErrorCode::CrystalTooLarge) {
                        throw;
                    }
                }
            }
            if (!ideal.empty()) {
                options.ideal_bitstring = ideal;
            }
            omg::SimResult result = omg::simulate_mc(schedule, cfg, shots, seed, options);
            write_text(report_out, dump(omg::simulation_report(manifest, result, distribution)));
            if (!budget_out.empty()) {
                write_text(budget_out, omg::budget_csv(result));
            }
            return 0;
        }

        if (cmp_cmd->parsed()) {
            omg::SpeciesDb db = common.species_db(&manifest);
            omg::MachineConfig cfg = common.machine(&manifest);
            manifest.add_input("circuit", circuit_path);
            const omg::SpeciesRecord &species = db.lookup(species_name);
            manifest.mode = "mmm,gmg,mgm";
            manifest.species = species.name;
            omg::LogicalCircuit circuit = omg::LogicalCircuit::load(circuit_path);
            omg::ModeComparisonReport report =
                omg::compare_modes(circuit, species, cfg, shots, seed, options, lower_options);
            if (!report_out.empty()) {
                write_text(report_out, dump(omg::comparison_report(manifest, report)));
            }
            write_text(table_out, omg::comparison_table(report));
            return 0;
        }
    } catch (const Error &e) {
        std::cerr << "omg: " << e.what() << "\n";
        return exit_code_for(e.code());
    }
    return 0;
}
