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

#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "omg/compiler.h"
#include "omg/error.h"
#include "support.h"

using namespace omg;

namespace {

const SpeciesRecord &ca43() {
    static SpeciesDb db;
    return db.lookup("43Ca+");
}

std::vector<PrimitiveKind> kinds(const Schedule &s) {
    std::vector<PrimitiveKind> out;
    for (const auto &item : s.items) {
        out.push_back(item.op.kind);
    }
    return out;
}

LogicalCircuit circuit(size_t n, std::vector<Instruction> ins) {
    return LogicalCircuit{n, std::move(ins)};
}

ErrorCode lowering_error(const LogicalCircuit &c, Mode mode) {
    try {
        lower(c, mode, ca43(), MachineConfig::defaults());
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "lowering succeeded";
    return ErrorCode::ParseError;
}

using K = PrimitiveKind;

}  // namespace

TEST(compiler, mmm_prep_gate_measure) {
    auto c = circuit(1, {Instruction::prep_z(0), Instruction::gate1q(0, Pauli::X, std::numbers::pi), Instruction::mid_measure(0)});
    auto s = lower(c, Mode::mmm(), ca43(), MachineConfig::defaults());
    EXPECT_EQ(
        kinds(s), (std::vector<K>{K::HeraldedMPrep, K::Gate1Q, K::ReadEnable, K::FluorescenceReadout, K::HeraldedMPrep}));
    EXPECT_TRUE(s.items[1].op.addressed);
    EXPECT_EQ(s.count(K::CoherentCast), 0u);
    EXPECT_TRUE(validate_schedule(s).is_protected());
}

TEST(compiler, gmg_gate2q) {
    auto s = lower(circuit(3, {Instruction::gate2q(0, 1, TwoQubitKind::MS)}), Mode::gmg(), ca43(), MachineConfig::defaults());
    ASSERT_EQ(kinds(s), (std::vector<K>{K::CoherentCast, K::Gate2Q, K::CoherentCast}));
    EXPECT_EQ(s.items[0].op.targets, (std::vector<size_t>{0, 1}));
    EXPECT_EQ(s.items[0].op.to, Encoding::M);
    EXPECT_FALSE(s.items[1].op.addressed);
    EXPECT_EQ(s.items[2].op.targets, (std::vector<size_t>{0, 1}));
    EXPECT_EQ(s.items[2].op.to, Encoding::G);
    for (const auto &item : s.items) {
        EXPECT_EQ(std::count(item.op.targets.begin(), item.op.targets.end(), 2u), 0);
    }
}

TEST(compiler, gmg_mid_measure) {
    auto s = lower(circuit(3, {Instruction::mid_measure(1)}), Mode::gmg(), ca43(), MachineConfig::defaults());
    auto k = kinds(s);
    ASSERT_GE(k.size(), 4u);
    EXPECT_EQ(k[0], K::CoherentCast);
    EXPECT_EQ(s.items[0].op.targets, (std::vector<size_t>{0, 2}));
    EXPECT_EQ(k[1], K::ReadEnable);
    EXPECT_EQ(s.items[1].op.targets, std::vector<size_t>{1});
    EXPECT_EQ(k[2], K::FluorescenceReadout);
    EXPECT_EQ(k.back(), K::CoherentCast);
    EXPECT_EQ(s.items.back().op.targets, (std::vector<size_t>{0, 2}));
    EXPECT_EQ(s.items.back().op.to, Encoding::G);
    // Re-preparation of the measured qubit sits between readout and cast-back.
    EXPECT_EQ(k.size(), 5u);
    EXPECT_EQ(k[3], K::GPrep);
}

TEST(compiler, gmg_gate2q_duration) {
    MachineConfig cfg = MachineConfig::defaults();
    cfg.durations[K::CoherentCast] = 10e-6;
    cfg.durations[K::Gate2Q] = 10e-6;
    auto s = lower(circuit(2, {Instruction::gate2q(0, 1, TwoQubitKind::MS)}), Mode::gmg(), ca43(), cfg);
    EXPECT_NEAR(schedule_duration(s), 50e-6, 1e-15);
}

TEST(compiler, durations_trivial) {
    Schedule empty;
    EXPECT_EQ(schedule_duration(empty), 0.0);
    auto s = lower(circuit(1, {Instruction::idle(1e-3)}), Mode::mmm(), ca43(), MachineConfig::defaults());
    EXPECT_EQ(schedule_duration(s), 1e-3);
}

TEST(compiler, mgm_casts_only_participants) {
    auto s = lower(
        circuit(5, {Instruction::gate1q(3, Pauli::X, 1.0), Instruction::gate2q(1, 4, TwoQubitKind::ZZ)}),
        Mode::mgm(),
        ca43(),
        MachineConfig::defaults());
    EXPECT_EQ(s.cast_applications(), 2u * 1 + 2u * 2);
}

TEST(compiler, mmm_cool_runs_alongside_gates) {
    auto c = circuit(2, {Instruction::gate1q(0, Pauli::X, 1.0), Instruction::cool(), Instruction::gate1q(1, Pauli::Y, 1.0)});
    auto s = lower(c, Mode::mmm(), ca43(), MachineConfig::defaults());
    EXPECT_EQ(s.n_coolant_ions, 1u);
    const ScheduledPrimitive *cool = nullptr;
    const ScheduledPrimitive *gate = nullptr;
    for (const auto &item : s.items) {
        if (item.op.kind == K::Cool) {
            cool = &item;
        }
        if (item.op.kind == K::Gate1Q && item.op.targets[0] == 1) {
            gate = &item;
        }
    }
    ASSERT_TRUE(cool && gate);
    EXPECT_LT(gate->start_s, cool->end_s());
    EXPECT_LT(schedule_duration(s), 2 * 10e-6 + 1e-3);
    auto report = validate_schedule(s);
    EXPECT_TRUE(report.is_protected());
    EXPECT_TRUE(report.is_valid()) << report.summary();
}

TEST(compiler, gmg_cool_serialized) {
    auto c = circuit(2, {Instruction::gate1q(0, Pauli::X, 1.0), Instruction::cool(), Instruction::gate1q(1, Pauli::Y, 1.0)});
    auto s = lower(c, Mode::gmg(), ca43(), MachineConfig::defaults());
    for (size_t k = 1; k < s.items.size(); ++k) {
        EXPECT_GE(s.items[k].start_s, s.items[k - 1].end_s() - 1e-15);
    }
}

TEST(compiler, mmm_gate_after_remote_unsupported) {
    auto c = circuit(2, {Instruction::remote_entangle(0, "p"), Instruction::gate1q(0, Pauli::X, 1.0)});
    EXPECT_EQ(lowering_error(c, Mode::mmm()), ErrorCode::UnsupportedInstruction);
    auto ok = circuit(2, {Instruction::remote_entangle(0, "p"), Instruction::mid_measure(0), Instruction::gate1q(0, Pauli::X, 1.0)});
    EXPECT_NO_THROW(lower(ok, Mode::mmm(), ca43(), MachineConfig::defaults()));
}

TEST(compiler, input_errors) {
    EXPECT_EQ(lowering_error(circuit(8, {Instruction::gate1q(12, Pauli::X, 1.0)}), Mode::gmg()), ErrorCode::InvalidCircuit);
    EXPECT_EQ(lowering_error(circuit(13, {Instruction::prep_z(0)}), Mode::gmg()), ErrorCode::CrystalTooLarge);
    EXPECT_EQ(lowering_error(circuit(2, {Instruction::prep_z(0)}), Mode{Encoding::G, Encoding::G, Encoding::G}), ErrorCode::InvalidMode);
}

TEST(compiler, validate_detects_exposure) {
    Schedule s;
    s.species = ca43();
    s.mode = Mode::gmg();
    s.n_data_ions = 2;
    s.items.push_back({0, 1e-5, Primitive::read_enable({0}, false, true)});
    s.items.push_back({1e-5, 2e-4, Primitive::fluorescence_readout({0})});
    finalize_schedule(s);
    auto report = validate_schedule(s);
    ASSERT_EQ(report.exposures.size(), 1u);
    EXPECT_EQ(report.exposures[0].ion, 1u);
    EXPECT_EQ(report.exposures[0].manifold, Manifold::Ground);
    EXPECT_EQ(report.exposures[0].encoding, Encoding::G);
    EXPECT_FALSE(report.is_protected());
}

TEST(compiler, validate_empty) {
    Schedule s;
    s.species = ca43();
    s.mode = Mode::mmm();
    s.n_data_ions = 1;
    EXPECT_TRUE(validate_schedule(s).is_protected());
}

TEST(compiler, validate_flags_overlap) {
    Schedule s;
    s.species = ca43();
    s.mode = Mode::mmm();
    s.n_data_ions = 2;
    s.items.push_back({0, 1e-5, Primitive::gate1q(0, Pauli::X, 1.0, true)});
    s.items.push_back({0, 1e-5, Primitive::gate1q(1, Pauli::X, 1.0, true)});
    finalize_schedule(s);
    EXPECT_FALSE(validate_schedule(s).is_valid());
}

TEST(compiler, deterministic_and_round_trips) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 50; ++k) {
        auto c = omg_test::random_circuit(rng);
        for (Mode mode : {Mode::mmm(), Mode::gmg(), Mode::mgm()}) {
            auto a = lower(c, mode, ca43(), MachineConfig::defaults());
            auto b = lower(c, mode, ca43(), MachineConfig::defaults());
            ASSERT_EQ(a, b);
            auto text = schedule_to_json(a).dump();
            ASSERT_EQ(schedule_from_json(nlohmann::json::parse(text)), a);
            ASSERT_EQ(timeline_csv(a), timeline_csv(b));
        }
    }
}

TEST(compiler, timeline_csv_format) {
    auto s = lower(circuit(2, {Instruction::gate2q(0, 1, TwoQubitKind::MS)}), Mode::gmg(), ca43(), MachineConfig::defaults());
    auto csv = timeline_csv(s);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "start_s,duration_s,kind,targets,addressed");
    EXPECT_NE(csv.find("coherent_cast,0 1,true"), std::string::npos);
    EXPECT_NE(csv.find("gate2q,0 1,false"), std::string::npos);
}

TEST(compiler, concatenate_appends_after_end) {
    auto a = lower(circuit(2, {Instruction::gate1q(0, Pauli::X, 1.0)}), Mode::gmg(), ca43(), MachineConfig::defaults());
    auto b = lower(circuit(2, {Instruction::gate1q(1, Pauli::X, 1.0)}), Mode::gmg(), ca43(), MachineConfig::defaults());
    auto c = concatenate(a, b);
    EXPECT_EQ(c.items.size(), a.items.size() + b.items.size());
    EXPECT_NEAR(schedule_duration(c), schedule_duration(a) + schedule_duration(b), 1e-15);
}

TEST(compiler, protection_invariants_by_mode) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        auto c = omg_test::random_circuit(rng);
        for (Mode mode : {Mode::mmm(), Mode::gmg(), Mode::mgm()}) {
            auto s = lower(c, mode, ca43(), MachineConfig::defaults());
            auto report = validate_schedule(s);
            ASSERT_TRUE(report.is_protected()) << report.summary();
            ASSERT_TRUE(report.is_valid()) << report.summary();
            if (mode == Mode::mmm()) {
                ASSERT_EQ(s.count(K::CoherentCast), 0u);
            }
        }
    }
}
