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

#ifndef OMG_SIMULATOR_H
#define OMG_SIMULATOR_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omg/circuit.h"
#include "omg/compiler.h"
#include "omg/primitive.h"

namespace omg {

/// Counter-based splitmix64 stream. Stream (seed, index) is a pure function of
/// its two keys, so trajectories can run in any order on any thread.
class TrajectoryRng {
   public:
    using result_type = uint64_t;

    TrajectoryRng(uint64_t seed, uint64_t stream);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return ~result_type{0};
    }
    result_type operator()();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

   private:
    uint64_t state_;
};

/// Bitstring (readout order) -> probability.
using OutcomeDistribution = std::map<std::string, double>;

/// Noiseless Born-rule distribution of the schedule's readout record. Casts,
/// read-enables, cooling and idles act as identity on the amplitudes.
OutcomeDistribution simulate_exact(const Schedule &schedule);

struct HeraldStats {
    uint64_t blocks = 0;
    double mean_attempts = 0;
    uint64_t max_attempts = 0;
    uint64_t exhausted = 0;

    bool operator==(const HeraldStats &) const = default;
};

struct SimResult {
    uint64_t shots = 0;
    std::map<std::string, uint64_t> outcome_histogram;
    double fidelity = 0;
    double fidelity_stderr = 0;
    std::string fidelity_definition;
    HeraldStats herald_attempt_stats;
    /// Mean over trajectories of the summed probability of every sampled
    /// channel, per source.
    std::map<std::string, double> budget;
    double leak_fraction = 0;
    /// Leaked, or a heralded block ran out of attempts.
    double failure_fraction = 0;
    uint64_t prep_retries = 0;

    bool operator==(const SimResult &) const = default;
};

struct SimOptions {
    unsigned workers = 1;
    /// Score fidelity as P(no failure and this exact bitstring).
    std::optional<std::string> ideal_bitstring;
    /// Score fidelity against the exact noiseless support; when false (or the
    /// exact branch count is too large) only failures count against it.
    bool use_exact_support = true;
};

SimResult simulate_mc(
    const Schedule &schedule, const MachineConfig &cfg, uint64_t shots, uint64_t seed, const SimOptions &options = {});

struct ModeRow {
    Mode mode;
    double fidelity = 0;
    double fidelity_stderr = 0;
    double duration_s = 0;
    size_t cast_applications = 0;
    size_t coherent_casts = 0;
    size_t exposures = 0;
    double leak_fraction = 0;
    std::map<std::string, double> budget;
};

struct ModeComparisonReport {
    std::string species;
    uint64_t shots = 0;
    uint64_t seed = 0;
    std::string fidelity_definition;
    std::vector<ModeRow> rows;

    const ModeRow &row(const Mode &mode) const;
};

ModeComparisonReport compare_modes(
    const LogicalCircuit &circuit,
    const SpeciesRecord &species,
    const MachineConfig &cfg,
    uint64_t shots,
    uint64_t seed,
    const SimOptions &options = {},
    const LowerOptions &lower_options = {});

}  // namespace omg

#endif
