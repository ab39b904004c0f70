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

#ifndef OMG_CIRCUIT_H
#define OMG_CIRCUIT_H

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "omg/primitive.h"

namespace omg {

enum class OpCode { PrepZ, Gate1Q, Gate2Q, MidMeasure, FinalMeasure, Cool, RemoteEntangle, Idle };

std::string op_name(OpCode op);

/// One mode-agnostic instruction. Unused fields keep their defaults.
struct Instruction {
    OpCode op = OpCode::Idle;
    size_t q = 0;
    size_t q2 = 0;
    Pauli axis = Pauli::X;
    double angle = 0;
    TwoQubitKind pair_kind = TwoQubitKind::MS;
    /// FinalMeasure targets, ascending.
    std::vector<size_t> qubits;
    std::string port;
    double duration_s = 0;

    static Instruction prep_z(size_t q);
    static Instruction gate1q(size_t q, Pauli axis, double angle);
    static Instruction gate2q(size_t q1, size_t q2, TwoQubitKind kind, double angle = 1.5707963267948966);
    static Instruction mid_measure(size_t q);
    static Instruction final_measure(std::vector<size_t> qubits);
    static Instruction cool();
    static Instruction remote_entangle(size_t q, std::string port);
    static Instruction idle(double seconds);

    bool operator==(const Instruction &) const = default;
};

struct LogicalCircuit {
    size_t n_qubits = 0;
    std::vector<Instruction> instructions;

    /// Throws Error(InvalidCircuit) on out-of-range qubits, a misplaced
    /// FinalMeasure, or malformed parameters.
    void validate() const;
    bool has_cool() const;

    nlohmann::json to_json() const;
    /// Structural parse only; call validate() for semantic checks.
    static LogicalCircuit from_json(const nlohmann::json &j);
    static LogicalCircuit load(const std::string &path);
};

}  // namespace omg

#endif
