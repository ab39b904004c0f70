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

#ifndef OMG_COMPILER_H
#define OMG_COMPILER_H

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "omg/circuit.h"
#include "omg/primitive.h"
#include "omg/species.h"
#include "omg/state.h"

namespace omg {

struct ScheduledPrimitive {
    double start_s = 0;
    double duration_s = 0;
    Primitive op;

    double end_s() const {
        return start_s + duration_s;
    }
    bool operator==(const ScheduledPrimitive &) const = default;
};

/// Timed sequence of primitives for one crystal. Ions [0, n_data_ions) carry
/// the logical qubits; any further ions are G-encoded coolants.
struct Schedule {
    SpeciesRecord species;
    Mode mode;
    size_t n_data_ions = 0;
    size_t n_coolant_ions = 0;
    std::vector<ScheduledPrimitive> items;
    double total_duration_s = 0;

    /// Crystal in the state the first item expects.
    Crystal initial_crystal() const;
    size_t count(PrimitiveKind kind) const;
    /// Target-ion applications of CoherentCast and OpenPumpCast.
    size_t cast_applications() const;
    /// Number of classical bits the readouts record.
    size_t measured_bits() const;

    bool operator==(const Schedule &) const = default;
};

struct LowerOptions {
    /// Global readout and cooling at the start or end of a {g,m,g} program
    /// skip the protective casts.
    bool boundary_direct = true;
};

/// Lowers a logical circuit under one of the three supported modes. Throws
/// InvalidCircuit, CrystalTooLarge, InvalidMode or UnsupportedInstruction.
Schedule lower(
    const LogicalCircuit &circuit,
    Mode mode,
    const SpeciesRecord &species,
    const MachineConfig &cfg,
    const LowerOptions &options = {});

/// Updates encodings of the primitive's targets the way executing it would.
void apply_encoding_effect(const Primitive &p, Crystal &crystal);

struct Exposure {
    double time_s = 0;
    size_t item = 0;
    PrimitiveKind kind = PrimitiveKind::Idle;
    size_t ion = 0;
    Encoding encoding = Encoding::G;
    Manifold manifold = Manifold::Ground;
};

struct ProtectionReport {
    std::vector<Exposure> exposures;
    /// Illegal primitives and timing violations found while replaying.
    std::vector<std::string> diagnostics;

    bool is_protected() const {
        return exposures.empty();
    }
    bool is_valid() const {
        return diagnostics.empty();
    }
    std::string summary() const;
};

/// Replays encodings through the schedule starting from `crystal` and reports
/// every data bystander whose encoding touches the light of a dissipative item.
ProtectionReport validate_schedule(const Schedule &schedule, const Crystal &crystal);
ProtectionReport validate_schedule(const Schedule &schedule);

double schedule_duration(const Schedule &schedule);

/// Items of `second` start after every item of `first` has finished.
Schedule concatenate(const Schedule &first, const Schedule &second);

/// Sorts items, recomputes total_duration_s.
void finalize_schedule(Schedule &schedule);

nlohmann::json schedule_to_json(const Schedule &schedule);
Schedule schedule_from_json(const nlohmann::json &j);

/// `start_s,duration_s,kind,targets,addressed`; targets space separated.
std::string timeline_csv(const Schedule &schedule);

}  // namespace omg

#endif
