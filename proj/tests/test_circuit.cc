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

#include <gtest/gtest.h>

#include "omg/circuit.h"
#include "omg/error.h"

using namespace omg;

TEST(circuit, json_round_trip) {
    LogicalCircuit c{3,
                     {Instruction::prep_z(0),
                      Instruction::gate1q(1, Pauli::Z, -0.5),
                      Instruction::gate2q(0, 2, TwoQubitKind::ZZ, 0.75),
                      Instruction::mid_measure(2),
                      Instruction::cool(),
                      Instruction::remote_entangle(1, "west"),
                      Instruction::idle(0.2),
                      Instruction::final_measure({0, 2})}};
    auto back = LogicalCircuit::from_json(nlohmann::json::parse(c.to_json().dump()));
    EXPECT_EQ(back.n_qubits, 3u);
    EXPECT_EQ(back.instructions, c.instructions);
}

TEST(circuit, json_defaults) {
    auto c = LogicalCircuit::from_json(nlohmann::json::parse(
        R"({"n_qubits": 2, "instructions": [{"op": "gate2q", "q1": 0, "q2": 1}, {"op": "final_measure"}]})"));
    EXPECT_EQ(c.instructions[0].pair_kind, TwoQubitKind::MS);
    EXPECT_DOUBLE_EQ(c.instructions[0].angle, 1.5707963267948966);
    EXPECT_EQ(c.instructions[1].qubits, (std::vector<size_t>{0, 1}));
}

TEST(circuit, parse_errors) {
    EXPECT_THROW(LogicalCircuit::from_json(nlohmann::json::parse(R"({"instructions": []})")), Error);
    EXPECT_THROW(
        LogicalCircuit::from_json(nlohmann::json::parse(R"({"n_qubits": 1, "instructions": [{"op": "teleport"}]})")),
        Error);
    EXPECT_THROW(LogicalCircuit::load("/nonexistent/c.json"), Error);
}

TEST(circuit, validate) {
    auto invalid = [](const LogicalCircuit &c) {
        try {
            c.validate();
        } catch (const Error &e) {
            return e.code() == ErrorCode::InvalidCircuit;
        }
        return false;
    };
    EXPECT_TRUE(invalid({0, {}}));
    EXPECT_TRUE(invalid({8, {Instruction::prep_z(12)}}));
    EXPECT_TRUE(invalid({2, {Instruction::gate2q(1, 1, TwoQubitKind::MS)}}));
    EXPECT_TRUE(invalid({2, {Instruction::final_measure({0}), Instruction::prep_z(0)}}));
    EXPECT_TRUE(invalid({2, {Instruction::final_measure({1, 1})}}));
    EXPECT_EQ(Instruction::final_measure({1, 0}).qubits, (std::vector<size_t>{0, 1}));
    EXPECT_TRUE(invalid({2, {Instruction::idle(-1)}}));
    EXPECT_NO_THROW((LogicalCircuit{2, {Instruction::cool(), Instruction::final_measure({0, 1})}}.validate()));
}
