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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "omg/compiler.h"
#include "omg/simulator.h"
#include "omg/species.h"
#include "support.h"

using namespace omg;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string capture(const std::string &cmd, int *status) {
    std::string out;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        *status = -1;
        return out;
    }
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
        out.append(buf, n);
    }
    int raw = pclose(pipe);
    *status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return out;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Splits a table line on runs of two or more spaces.
std::vector<std::string> cells(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    size_t spaces = 0;
    for (char ch : line) {
        if (ch == ' ') {
            ++spaces;
            continue;
        }
        if (spaces >= 2 && !cur.empty()) {
            out.push_back(cur);
            cur.clear();
        } else if (spaces == 1) {
            cur += ' ';
        }
        spaces = 0;
        cur += ch;
    }
    if (!cur.empty()) {
        out.push_back(cur);
    }
    return out;
}

const SpeciesRecord &species(const std::string &name) {
    static SpeciesDb db;
    return db.lookup(name);
}

// Expected species table, cell by cell.
const std::vector<std::vector<std::string>> kSpeciesTable = {
    {"43Ca+", "7/2", "3↔4", "3.2 GHz", "D5/2", "1.2 s", "1↔2,...,5↔6", "7, 10, 15, 20, 25", "729 nm"},
    {"87Sr+", "9/2", "4↔5", "5.0 GHz", "D5/2", "0.39 s", "2↔3,...,6↔7", "8.2, 5.2, 2.7, 17, 38", "674 nm"},
    {"133Ba+", "1/2", "0↔1", "9.9 GHz", "D5/2", "30 s", "2↔3", "89", "1.76 µm"},
    {"135Ba+", "3/2", "1↔2", "7.2 GHz", "D5/2", "30 s", "1↔2,...,3↔4", "52, 50, 12", "1.76 µm"},
    {"137Ba+", "3/2", "1↔2", "8.0 GHz", "D5/2", "30 s", "1↔2,...,3↔4", "72, 63, 0.49", "1.76 µm"},
    {"171Yb+", "1/2", "0↔1", "12.6 GHz", "F°7/2", "1.58 years", "3↔4", "3620", "467 nm"},
    {"173Yb+", "5/2", "2↔3", "10.5 GHz", "F°7/2", "days-years", "1↔2,...,5↔6", "260, 1000, 130, 920, 3300", "467 nm"},
};

Outcome species_table() {
    int status = 0;
    std::string text = capture(OMG_CLI_PATH " species list", &status);
    if (status != 0) {
        return {false, fmt::format("species list exited {}", status)};
    }
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    size_t row = 0;
    while (std::getline(in, line)) {
        if (row >= kSpeciesTable.size()) {
            return {false, "more than 7 rows"};
        }
        auto got = cells(line);
        if (got != kSpeciesTable[row]) {
            return {false, fmt::format("row {} differs: '{}'", row + 1, line)};
        }
        ++row;
    }
    if (row != kSpeciesTable.size()) {
        return {false, fmt::format("{} rows", row)};
    }
    // Numeric spot checks against the record values themselves.
    const auto &yb = species("171Yb+");
    const auto &ba = species("137Ba+");
    bool numbers = yb.g_splitting_hz == 12.6e9 && yb.m_splittings_hz == std::vector<double>{3620e6} &&
                   yb.m_lifetime_s == 1.58 * 31557600.0 &&
                   ba.m_splittings_hz == std::vector<double>{72e6, 63e6, 0.49e6};
    if (!numbers) {
        return {false, "record values differ from the table"};
    }
    return {true, "7 rows, 63 cells match"};
}

const Mode kModes[] = {Mode::mmm(), Mode::gmg(), Mode::mgm()};

Outcome protection() {
    std::mt19937_64 rng(20260101);
    omg_test::RandomCircuitOptions options;
    options.max_qubits = 6;
    options.max_instructions = 30;
    std::set<OpCode> seen;
    size_t exposures = 0, mmm_casts = 0, invalid = 0, schedules = 0;
    for (int k = 0; k < 1000; ++k) {
        auto c = omg_test::random_circuit(rng, options);
        for (const auto &ins : c.instructions) {
            seen.insert(ins.op);
        }
        const auto &sp = builtin_species()[static_cast<size_t>(k) % builtin_species().size()];
        for (Mode mode : kModes) {
            auto s = lower(c, mode, sp, MachineConfig::defaults());
            auto report = validate_schedule(s);
            exposures += report.exposures.size();
            invalid += !report.is_valid();
            if (mode == Mode::mmm()) {
                mmm_casts += s.count(PrimitiveKind::CoherentCast);
            }
            ++schedules;
        }
    }
    bool pass = exposures == 0 && mmm_casts == 0 && invalid == 0 && seen.size() == 8;
    return {pass,
            fmt::format(
                "{} schedules, {} exposures, {} CoherentCast in mmm, {} invalid, {}/8 instruction kinds",
                schedules,
                exposures,
                mmm_casts,
                invalid,
                seen.size())};
}

Outcome semantics() {
    std::mt19937_64 rng(777);
    omg_test::RandomCircuitOptions options;
    options.max_qubits = 4;
    options.max_instructions = 30;
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
        auto c = omg_test::random_circuit(rng, options);
        auto expected = omg_test::oracle_distribution(c);
        for (Mode mode : kModes) {
            auto got = simulate_exact(lower(c, mode, species("43Ca+"), MachineConfig::defaults()));
            worst = std::max(worst, omg_test::max_abs_difference(got, expected));
        }
    }
    return {worst <= 1e-9, fmt::format("200 circuits x 3 modes, max |dp| = {:.3g}", worst)};
}

Outcome decay() {
    const uint64_t shots = 100000;
    std::string detail;
    bool pass = true;
    MachineConfig cfg = MachineConfig::noiseless();
    uint64_t seed = 41;
    for (double t : {0.12, 1.2, 3.6}) {
        LogicalCircuit c{1, {Instruction::idle(t)}};
        auto s = lower(c, Mode::mmm(), species("43Ca+"), cfg);
        auto r = simulate_mc(s, cfg, shots, seed++);
        const double p = -std::expm1(-t / 1.2);
        const double sigma = std::sqrt(p * (1 - p) / shots);
        const double z = (r.leak_fraction - p) / sigma;
        pass &= std::abs(z) < 3;
        detail += fmt::format("{}t={} s: {:.5f} vs {:.5f} ({:+.2f} sigma)", detail.empty() ? "" : "; ", t, r.leak_fraction, p, z);
    }
    return {pass, detail};
}

LogicalCircuit storage_benchmark() {
    const double half_pi = std::numbers::pi / 2;
    return {2,
            {Instruction::prep_z(0),
             Instruction::prep_z(1),
             Instruction::gate1q(0, Pauli::Y, half_pi),
             Instruction::gate2q(0, 1, TwoQubitKind::MS, half_pi),
             Instruction::idle(0.2),
             Instruction::gate2q(0, 1, TwoQubitKind::MS, -half_pi),
             Instruction::gate1q(0, Pauli::Y, -half_pi),
             Instruction::final_measure({0, 1})}};
}

Outcome mode_tradeoff() {
    const uint64_t shots = 100000;
    MachineConfig cfg = MachineConfig::noiseless();
    SimOptions options;
    options.ideal_bitstring = "00";
    auto diff = [&](const std::string &name, double &z) {
        auto gmg = simulate_mc(lower(storage_benchmark(), Mode::gmg(), species(name), cfg), cfg, shots, 5, options);
        auto mgm = simulate_mc(lower(storage_benchmark(), Mode::mgm(), species(name), cfg), cfg, shots, 6, options);
        const double sigma = std::hypot(omg_test::smoothed_sigma(gmg.fidelity, shots), omg_test::smoothed_sigma(mgm.fidelity, shots));
        z = (gmg.fidelity - mgm.fidelity) / sigma;
        return fmt::format("{}: gmg {:.5f} mgm {:.5f} ({:+.1f} sigma)", name, gmg.fidelity, mgm.fidelity, z);
    };
    double z_sr = 0, z_yb = 0;
    std::string detail = diff("87Sr+", z_sr) + "; " + diff("171Yb+", z_yb);
    return {z_sr > 10 && std::abs(z_yb) < 3, detail};
}

Outcome herald() {
    const uint64_t shots = 10000;
    const double p = 0.01;
    MachineConfig cfg = MachineConfig::defaults();
    cfg.herald_success_prob = p;
    cfg.scatter_crosstalk_prob = 1e-3;
    LogicalCircuit c{3, {Instruction::remote_entangle(1, "link"), Instruction::mid_measure(1)}};
    const double sigma = std::sqrt((1 - p) / (p * p) / shots);
    bool pass = true;
    std::string detail;
    uint64_t seed = 61;
    for (Mode mode : kModes) {
        auto r = simulate_mc(lower(c, mode, species("43Ca+"), cfg), cfg, shots, seed++);
        const double z = (r.herald_attempt_stats.mean_attempts - 1 / p) / sigma;
        const double crosstalk = r.budget.at("crosstalk");
        pass &= std::abs(z) < 3 && crosstalk == 0 && r.herald_attempt_stats.blocks == shots;
        detail += fmt::format(
            "{}{}: mean {:.2f} ({:+.2f} sigma), crosstalk {}",
            detail.empty() ? "" : "; ",
            mode.name(),
            r.herald_attempt_stats.mean_attempts,
            z,
            crosstalk);
    }
    return {pass, detail};
}

Outcome determinism() {
    std::mt19937_64 rng(99);
    omg_test::RandomCircuitOptions options;
    options.max_qubits = 5;
    options.max_instructions = 20;
    const std::string dir = "acceptance_determinism";
    std::filesystem::create_directories(dir);
    size_t runs = 0;
    for (int k = 0; k < 3; ++k) {
        auto c = omg_test::random_circuit(rng, options);
        const std::string circuit = fmt::format("{}/circuit{}.json", dir, k);
        std::ofstream(circuit) << c.to_json().dump(2);
        for (Mode mode : kModes) {
            std::string reports[3];
            const char *variants[] = {"--workers 1", "--workers 8", "--workers 1"};
            for (int v = 0; v < 3; ++v) {
                reports[v] = fmt::format("{}/r{}_{}_{}.json", dir, k, mode.name(), v);
                int status = 0;
                capture(
                    fmt::format(
                        OMG_CLI_PATH " simulate {} --mode {} --species 87Sr+ --shots 4000 --seed 7 --no-timestamp {} -o {}",
                        circuit,
                        mode.name(),
                        variants[v],
                        reports[v]),
                    &status);
                if (status != 0) {
                    return {false, fmt::format("simulate exited {} on {}", status, circuit)};
                }
                ++runs;
            }
            const std::string a = slurp(reports[0]);
            if (a.empty() || a != slurp(reports[1]) || a != slurp(reports[2])) {
                return {false, fmt::format("reports differ for {} in {}", circuit, mode.name())};
            }
        }
    }
    return {true, fmt::format("{} simulate runs, reports byte-identical across 1 and 8 workers", runs)};
}

struct Criterion {
    int id;
    const char *name;
    double budget_s;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "species-table", 1, species_table},
        {2, "protection", 30, protection},
        {3, "semantics", 60, semantics},
        {4, "decay", 60, decay},
        {5, "mode-tradeoff", 120, mode_tradeoff},
        {6, "herald", 60, herald},
        {7, "determinism", 30, determinism},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = elapsed < c.budget_s;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::cout << fmt::format(
                         "{} {} {}: {} [{:.2f} s of {} s{}]",
                         pass ? "PASS" : "FAIL",
                         c.id,
                         c.name,
                         o.detail,
                         elapsed,
                         c.budget_s,
                         in_time ? "" : ", over budget")
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
