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

#include "omg/circuit.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "omg/error.h"

using nlohmann::json;

namespace omg {

namespace {

struct OpEntry {
    OpCode op;
    const char *name;
};

constexpr OpEntry kOpNames[] = {
    {OpCode::PrepZ, "prep_z"},
    {OpCode::Gate1Q, "gate1q"},
    {OpCode::Gate2Q, "gate2q"},
    {OpCode::MidMeasure, "mid_measure"},
    {OpCode::FinalMeasure, "final_measure"},
    {OpCode::Cool, "cool"},
    {OpCode::RemoteEntangle, "remote_entangle"},
    {OpCode::Idle, "idle"},
};

OpCode parse_op(const std::string &name) {
    for (const auto &e : kOpNames) {
        if (name == e.name) {
            return e.op;
        }
    }
    throw Error(ErrorCode::ParseError, "unknown instruction op '" + name + "'");
}

}  // namespace

std::string op_name(OpCode op) {
    for (const auto &e : kOpNames) {
        if (e.op == op) {
            return e.name;
        }
    }
    return "unknown";
}

Instruction Instruction::prep_z(size_t q) {
    Instruction i;
    i.op = OpCode::PrepZ;
    i.q = q;
    return i;
}

Instruction Instruction::gate1q(size_t q, Pauli axis, double angle) {
    Instruction i;
    i.op = OpCode::Gate1Q;
    i.q = q;
    i.axis = axis;
    i.angle = angle;
    return i;
}

Instruction Instruction::gate2q(size_t q1, size_t q2, TwoQubitKind kind, double angle) {
    Instruction i;
    i.op = OpCode::Gate2Q;
    i.q = q1;
    i.q2 = q2;
    i.pair_kind = kind;
    i.angle = angle;
    return i;
}

Instruction Instruction::mid_measure(size_t q) {
    Instruction i;
    i.op = OpCode::MidMeasure;
    i.q = q;
    return i;
}

Instruction Instruction::final_measure(std::vector<size_t> qubits) {
    Instruction i;
    i.op = OpCode::FinalMeasure;
    std::sort(qubits.begin(), qubits.end());
    i.qubits = std::move(qubits);
    return i;
}

Instruction Instruction::cool() {
    Instruction i;
    i.op = OpCode::Cool;
    return i;
}

Instruction Instruction::remote_entangle(size_t q, std::string port) {
    Instruction i;
    i.op = OpCode::RemoteEntangle;
    i.q = q;
    i.port = std::move(port);
    return i;
}

Instruction Instruction::idle(double seconds) {
    Instruction i;
    i.op = OpCode::Idle;
    i.duration_s = seconds;
    return i;
}

void LogicalCircuit::validate() const {
    auto fail = [](size_t k, const std::string &why) {
        throw Error(ErrorCode::InvalidCircuit, fmt::format("instruction {}: {}", k, why));
    };
    if (n_qubits == 0) {
        throw Error(ErrorCode::InvalidCircuit, "n_qubits must be >= 1");
    }
    auto check_q = [&](size_t k, size_t q) {
        if (q >= n_qubits) {
            fail(k, fmt::format("qubit {} out of range for {} qubits", q, n_qubits));
        }
    };
    for (size_t k = 0; k < instructions.size(); ++k) {
        const auto &ins = instructions[k];
        switch (ins.op) {
            case OpCode::PrepZ:
            case OpCode::MidMeasure:
            case OpCode::RemoteEntangle:
                check_q(k, ins.q);
                break;
            case OpCode::Gate1Q:
                check_q(k, ins.q);
                if (!std::isfinite(ins.angle) || ins.axis == Pauli::I) {
                    fail(k, "gate1q needs a finite angle about x, y or z");
                }
                break;
            case OpCode::Gate2Q:
                check_q(k, ins.q);
                check_q(k, ins.q2);
                if (ins.q == ins.q2) {
                    fail(k, "gate2q needs two distinct qubits");
                }
                if (!std::isfinite(ins.angle)) {
                    fail(k, "gate2q angle must be finite");
                }
                break;
            case OpCode::FinalMeasure:
                if (k + 1 != instructions.size()) {
                    fail(k, "final_measure must be the last instruction");
                }
                if (ins.qubits.empty()) {
                    fail(k, "final_measure needs at least one qubit");
                }
                for (size_t j = 0; j < ins.qubits.size(); ++j) {
                    check_q(k, ins.qubits[j]);
                    if (j > 0 && ins.qubits[j] <= ins.qubits[j - 1]) {
                        fail(k, "final_measure qubits must be distinct and ascending");
                    }
                }
                break;
            case OpCode::Cool:
                break;
            case OpCode::Idle:
                if (!(ins.duration_s >= 0) || !std::isfinite(ins.duration_s)) {
                    fail(k, "idle duration must be >= 0");
                }
                break;
        }
    }
}

bool LogicalCircuit::has_cool() const {
    return std::any_of(instructions.begin(), instructions.end(), [](const Instruction &i) {
        return i.op == OpCode::Cool;
    });
}

json LogicalCircuit::to_json() const {
    json list = json::array();
    for (const auto &ins : instructions) {
        json j{{"op", op_name(ins.op)}};
        switch (ins.op) {
            case OpCode::PrepZ:
            case OpCode::MidMeasure:
                j["q"] = ins.q;
                break;
            case OpCode::Gate1Q:
                j["q"] = ins.q;
                j["axis"] = axis_name(ins.axis);
                j["angle"] = ins.angle;
                break;
            case OpCode::Gate2Q:
                j["q1"] = ins.q;
                j["q2"] = ins.q2;
                j["kind"] = two_qubit_kind_name(ins.pair_kind);
                j["angle"] = ins.angle;
                break;
            case OpCode::FinalMeasure:
                j["qubits"] = ins.qubits;
                break;
            case OpCode::RemoteEntangle:
                j["q"] = ins.q;
                j["port"] = ins.port;
                break;
            case OpCode::Idle:
                j["duration_s"] = ins.duration_s;
                break;
            case OpCode::Cool:
                break;
        }
        list.push_back(j);
    }
    return json{{"n_qubits", n_qubits}, {"instructions", list}};
}

LogicalCircuit LogicalCircuit::from_json(const json &j) {
    LogicalCircuit c;
    try {
        c.n_qubits = j.at("n_qubits").get<size_t>();
        for (const auto &e : j.at("instructions")) {
            OpCode op = parse_op(e.at("op").get<std::string>());
            switch (op) {
                case OpCode::PrepZ:
                    c.instructions.push_back(Instruction::prep_z(e.at("q").get<size_t>()));
                    break;
                case OpCode::MidMeasure:
                    c.instructions.push_back(Instruction::mid_measure(e.at("q").get<size_t>()));
                    break;
                case OpCode::Gate1Q:
                    c.instructions.push_back(Instruction::gate1q(
                        e.at("q").get<size_t>(),
                        parse_axis(e.at("axis").get<std::string>()),
                        e.at("angle").get<double>()));
                    break;
                case OpCode::Gate2Q:
                    c.instructions.push_back(Instruction::gate2q(
                        e.at("q1").get<size_t>(),
                        e.at("q2").get<size_t>(),
                        parse_two_qubit_kind(e.value("kind", std::string("ms"))),
                        e.value("angle", 1.5707963267948966)));
                    break;
                case OpCode::FinalMeasure: {
                    std::vector<size_t> qs;
                    if (e.contains("qubits")) {
                        qs = e.at("qubits").get<std::vector<size_t>>();
                    } else {
                        for (size_t q = 0; q < c.n_qubits; ++q) {
                            qs.push_back(q);
                        }
                    }
                    c.instructions.push_back(Instruction::final_measure(std::move(qs)));
                    break;
                }
                case OpCode::Cool:
                    c.instructions.push_back(Instruction::cool());
                    break;
                case OpCode::RemoteEntangle:
                    c.instructions.push_back(Instruction::remote_entangle(
                        e.at("q").get<size_t>(), e.value("port", std::string("port0"))));
                    break;
                case OpCode::Idle:
                    c.instructions.push_back(Instruction::idle(e.at("duration_s").get<double>()));
                    break;
            }
        }
    } catch (const json::exception &e) {
        throw Error(ErrorCode::ParseError, std::string("circuit: ") + e.what());
    }
    return c;
}

LogicalCircuit LogicalCircuit::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open circuit '" + path + "'");
    }
    try {
        return from_json(json::parse(in));
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

}  // namespace omg
