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

#ifndef OMG_TESTS_SUPPORT_H
#define OMG_TESTS_SUPPORT_H

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "omg/circuit.h"

namespace omg_test {

/// Record -> probability by density-matrix execution of the logical circuit.
/// Shares no code with the library's state vector or lowering.
std::map<std::string, double> oracle_distribution(const omg::LogicalCircuit &circuit);

struct RandomCircuitOptions {
    size_t max_qubits = 6;
    size_t max_instructions = 30;
    /// Upper bound on recorded bits, keeps exact branching small.
    size_t max_measured_bits = 10;
    double max_idle_s = 1e-3;
};

/// Uses every instruction kind. RemoteEntangle(q) is always followed by
/// MidMeasure(q).
omg::LogicalCircuit random_circuit(std::mt19937_64 &rng, const RandomCircuitOptions &options = {});

/// Binomial standard error with the estimate smoothed to (k + 1/2) / (n + 1).
double smoothed_sigma(double fraction, uint64_t n);

double max_abs_difference(const std::map<std::string, double> &a, const std::map<std::string, double> &b);

}  // namespace omg_test

#endif
