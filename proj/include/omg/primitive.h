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

#ifndef OMG_PRIMITIVE_H
#define OMG_PRIMITIVE_H

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "omg/state.h"

namespace omg {

enum class PrimitiveKind {
    CoherentCast,
    OpenPumpCast,
    HeraldedMPrep,
    GPrep,
    ReadEnable,
    FluorescenceReadout,
    Gate1Q,
    Gate2Q,
    Cool,
    RemoteEntangleAttempt,
    Idle,
};

inline constexpr std::array kAllPrimitiveKinds{
    PrimitiveKind::CoherentCast,
    PrimitiveKind::OpenPumpCast,
    PrimitiveKind::HeraldedMPrep,
    PrimitiveKind::GPrep,
    PrimitiveKind::ReadEnable,
    PrimitiveKind::FluorescenceReadout,
    PrimitiveKind::Gate1Q,
    PrimitiveKind::Gate2Q,
    PrimitiveKind::Cool,
    PrimitiveKind::RemoteEntangleAttempt,
    PrimitiveKind::Idle,
};

/// snake_case name used in JSON files and timelines.
std::string kind_name(PrimitiveKind kind);
PrimitiveKind parse_kind(const std::string &name);

enum class TwoQubitKind { MS, ZZ };

std::string two_qubit_kind_name(TwoQubitKind kind);
TwoQubitKind parse_two_qubit_kind(const std::string &name);
/// The Pauli P of exp(-i angle/2 P(x)P).
Pauli two_qubit_pauli(TwoQubitKind kind);

std::string axis_name(Pauli axis);
Pauli parse_axis(const std::string &name);

struct Primitive {
    PrimitiveKind kind = PrimitiveKind::Idle;
    std::vector<size_t> targets;
    /// Focused beam executed serially per target, as opposed to one global beam.
    bool addressed = false;

    // CoherentCast uses from/to; OpenPumpCast uses to.
    Encoding from = Encoding::G;
    Encoding to = Encoding::M;
    // ReadEnable: optical pumping through an open channel vs coherent shelving.
    bool open_channel = false;
    Pauli axis = Pauli::X;
    double angle = 0;
    TwoQubitKind pair_kind = TwoQubitKind::MS;
    std::string port;
    double idle_s = 0;
    /// Retry bound of a heralded block (RemoteEntangleAttempt, HeraldedMPrep).
    int max_attempts = 1;

    static Primitive coherent_cast(std::vector<size_t> targets, Encoding from, Encoding to);
    static Primitive open_pump_cast(std::vector<size_t> targets, Encoding to);
    static Primitive heralded_m_prep(std::vector<size_t> targets, bool addressed, int max_attempts);
    static Primitive g_prep(std::vector<size_t> targets, bool addressed);
    static Primitive read_enable(std::vector<size_t> targets, bool open_channel, bool addressed);
    static Primitive fluorescence_readout(std::vector<size_t> targets);
    static Primitive gate1q(size_t target, Pauli axis, double angle, bool addressed);
    static Primitive gate2q(size_t a, size_t b, TwoQubitKind kind, double angle, bool addressed);
    static Primitive cool(std::vector<size_t> targets, bool addressed);
    static Primitive remote_entangle(size_t target, std::string port, int max_attempts);
    static Primitive idle(double seconds);

    bool is_cast() const {
        return kind == PrimitiveKind::CoherentCast || kind == PrimitiveKind::OpenPumpCast;
    }
    bool is_global() const {
        return !addressed;
    }
    std::string str() const;

    bool operator==(const Primitive &) const = default;
};

nlohmann::json primitive_to_json(const Primitive &p);
Primitive primitive_from_json(const nlohmann::json &j);

/// Placeholder numbers only; nothing here is a measured hardware value.
struct MachineConfig {
    std::map<PrimitiveKind, double> durations;
    std::map<PrimitiveKind, double> infidelities;
    double scatter_crosstalk_prob = 0;
    double herald_success_prob = 1;
    double cast_infidelity_coherent = 0;
    double cast_infidelity_open = 0;
    double readout_error = 0;
    double prep_herald_success_prob = 1;
    int max_herald_attempts = 1000;
    int max_prep_retries = 10;

    /// Round non-physical defaults: 1e-3 gate infidelity, 1e-3 / 1e-2 casts,
    /// 1e-3 crosstalk, 0.01 herald, 10 us gates and casts, 200 us readout, 1 ms cool.
    static MachineConfig defaults();
    /// Default timing with every error probability set to zero.
    static MachineConfig noiseless();

    void validate() const;
    nlohmann::json to_json() const;
    /// Keys absent from the file keep their default value.
    static MachineConfig from_json(const nlohmann::json &j);
    static MachineConfig load(const std::string &path);
};

struct Legality {
    bool legal = true;
    std::string diagnostic;

    explicit operator bool() const {
        return legal;
    }
};

/// Checks arity, target range and that targets carry the encoding the mode
/// prescribes for the primitive's operation class.
Legality legal_in_mode(const Primitive &p, const Crystal &crystal);

/// Seconds for one attempt: per-target x |targets| when addressed, else a single duration.
double attempt_duration(const Primitive &p, const MachineConfig &cfg);
/// Like attempt_duration, except a RemoteEntangleAttempt block is charged its
/// expected attempt count min(1 / p_herald, max_attempts).
double duration_of(const Primitive &p, const MachineConfig &cfg);

/// Manifold of the light a dissipative primitive applies or scatters;
/// nullopt for coherent primitives.
std::optional<Manifold> dissipative_manifold(const Primitive &p, const Crystal &crystal);

/// Budget attribution buckets.
enum class BudgetKey {
    Decay,
    Crosstalk,
    Readout,
    Gate1Q,
    Gate2Q,
    CoherentCast,
    OpenPumpCast,
    ReadEnable,
    HeraldedMPrep,
    GPrep,
    Cool,
    RemoteEntangle,
    Count,
};

std::string budget_key_name(BudgetKey key);

enum class ChannelKind { Depolarize, Leak, ReadoutFlip };

struct ErrorChannel {
    ChannelKind kind = ChannelKind::Depolarize;
    double p = 0;
    size_t ion = 0;
    /// Index of the originating schedule item (0 when standalone).
    size_t source = 0;
    BudgetKey budget = BudgetKey::Gate1Q;

    bool operator==(const ErrorChannel &) const = default;
};

/// Target infidelity, bystander crosstalk and metastable decay channels for one
/// application of p against the crystal's current encodings. Coolant and leaked
/// ions receive no channels.
std::vector<ErrorChannel> error_channels_of(
    const Primitive &p, const Crystal &crystal, const MachineConfig &cfg, size_t source = 0);

}  // namespace omg

#endif
