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

#include "omg/primitive.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "omg/error.h"

using nlohmann::json;

namespace omg {

namespace {

struct KindEntry {
    PrimitiveKind kind;
    const char *name;
};

constexpr KindEntry kKindNames[] = {
    {PrimitiveKind::CoherentCast, "coherent_cast"},
    {PrimitiveKind::OpenPumpCast, "open_pump_cast"},
    {PrimitiveKind::HeraldedMPrep, "heralded_m_prep"},
    {PrimitiveKind::GPrep, "g_prep"},
    {PrimitiveKind::ReadEnable, "read_enable"},
    {PrimitiveKind::FluorescenceReadout, "fluorescence_readout"},
    {PrimitiveKind::Gate1Q, "gate1q"},
    {PrimitiveKind::Gate2Q, "gate2q"},
    {PrimitiveKind::Cool, "cool"},
    {PrimitiveKind::RemoteEntangleAttempt, "remote_entangle_attempt"},
    {PrimitiveKind::Idle, "idle"},
};

std::string target_list(const std::vector<size_t> &targets) {
    return fmt::format("{}", fmt::join(targets, " "));
}

}  // namespace

std::string kind_name(PrimitiveKind kind) {
    for (const auto &e : kKindNames) {
        if (e.kind == kind) {
            return e.name;
        }
    }
    return "unknown";
}

PrimitiveKind parse_kind(const std::string &name) {
    for (const auto &e : kKindNames) {
        if (name == e.name) {
            return e.kind;
        }
    }
    throw Error(ErrorCode::ParseError, "unknown primitive kind '" + name + "'");
}

std::string two_qubit_kind_name(TwoQubitKind kind) {
    return kind == TwoQubitKind::MS ? "ms" : "zz";
}

TwoQubitKind parse_two_qubit_kind(const std::string &name) {
    if (name == "ms" || name == "MS") {
        return TwoQubitKind::MS;
    }
    if (name == "zz" || name == "ZZ") {
        return TwoQubitKind::ZZ;
    }
    throw Error(ErrorCode::ParseError, "unknown two-qubit gate kind '" + name + "' (expected ms or zz)");
}

Pauli two_qubit_pauli(TwoQubitKind kind) {
    return kind == TwoQubitKind::MS ? Pauli::X : Pauli::Z;
}

std::string axis_name(Pauli axis) {
    switch (axis) {
        case Pauli::X:
            return "x";
        case Pauli::Y:
            return "y";
        case Pauli::Z:
            return "z";
        case Pauli::I:
            return "i";
    }
    return "?";
}

Pauli parse_axis(const std::string &name) {
    if (name == "x" || name == "X") {
        return Pauli::X;
    }
    if (name == "y" || name == "Y") {
        return Pauli::Y;
    }
    if (name == "z" || name == "Z") {
        return Pauli::Z;
    }
    throw Error(ErrorCode::ParseError, "unknown rotation axis '" + name + "' (expected x, y or z)");
}

Primitive Primitive::coherent_cast(std::vector<size_t> targets, Encoding from, Encoding to) {
    Primitive p;
    p.kind = PrimitiveKind::CoherentCast;
    p.targets = std::move(targets);
    p.addressed = true;
    p.from = from;
    p.to = to;
    return p;
}

Primitive Primitive::open_pump_cast(std::vector<size_t> targets, Encoding to) {
    Primitive p;
    p.kind = PrimitiveKind::OpenPumpCast;
    p.targets = std::move(targets);
    p.addressed = true;
    p.to = to;
    return p;
}

Primitive Primitive::heralded_m_prep(std::vector<size_t> targets, bool addressed, int max_attempts) {
    Primitive p;
    p.kind = PrimitiveKind::HeraldedMPrep;
    p.targets = std::move(targets);
    p.addressed = addressed;
    p.max_attempts = max_attempts;
    return p;
}

Primitive Primitive::g_prep(std::vector<size_t> targets, bool addressed) {
    Primitive p;
    p.kind = PrimitiveKind::GPrep;
    p.targets = std::move(targets);
    p.addressed = addressed;
    return p;
}

Primitive Primitive::read_enable(std::vector<size_t> targets, bool open_channel, bool addressed) {
    Primitive p;
    p.kind = PrimitiveKind::ReadEnable;
    p.targets = std::move(targets);
    p.open_channel = open_channel;
    p.addressed = addressed;
    p.to = Encoding::O;
    return p;
}

Primitive Primitive::fluorescence_readout(std::vector<size_t> targets) {
    Primitive p;
    p.kind = PrimitiveKind::FluorescenceReadout;
    p.targets = std::move(targets);
    p.addressed = false;
    return p;
}

Primitive Primitive::gate1q(size_t target, Pauli axis, double angle, bool addressed) {
    Primitive p;
    p.kind = PrimitiveKind::Gate1Q;
    p.targets = {target};
    p.axis = axis;
    p.angle = angle;
    p.addressed = addressed;
    return p;
}

Primitive Primitive::gate2q(size_t a, size_t b, TwoQubitKind kind, double angle, bool addressed) {
    Primitive p;
    p.kind = PrimitiveKind::Gate2Q;
    p.targets = {a, b};
    p.pair_kind = kind;
    p.angle = angle;
    p.addressed = addressed;
    return p;
}

Primitive Primitive::cool(std::vector<size_t> targets, bool addressed) {
    Primitive p;
    p.kind = PrimitiveKind::Cool;
    p.targets = std::move(targets);
    p.addressed = addressed;
    return p;
}

Primitive Primitive::remote_entangle(size_t target, std::string port, int max_attempts) {
    Primitive p;
    p.kind = PrimitiveKind::RemoteEntangleAttempt;
    p.targets = {target};
    p.addressed = true;
    p.port = std::move(port);
    p.max_attempts = max_attempts;
    return p;
}

Primitive Primitive::idle(double seconds) {
    Primitive p;
    p.kind = PrimitiveKind::Idle;
    p.idle_s = seconds;
    return p;
}

std::string Primitive::str() const {
    std::string s = kind_name(kind);
    switch (kind) {
        case PrimitiveKind::CoherentCast:
            s += fmt::format(" {}->{}", encoding_char(from), encoding_char(to));
            break;
        case PrimitiveKind::OpenPumpCast:
            s += fmt::format(" ->{}", encoding_char(to));
            break;
        case PrimitiveKind::ReadEnable:
            s += open_channel ? " open" : " coherent";
            break;
        case PrimitiveKind::Gate1Q:
            s += fmt::format(" {}({})", axis_name(axis), angle);
            break;
        case PrimitiveKind::Gate2Q:
            s += fmt::format(" {}({})", two_qubit_kind_name(pair_kind), angle);
            break;
        case PrimitiveKind::RemoteEntangleAttempt:
            s += fmt::format(" port={} max={}", port, max_attempts);
            break;
        case PrimitiveKind::Idle:
            s += fmt::format(" {}s", idle_s);
            break;
        default:
            break;
    }
    s += " [" + target_list(targets) + "]";
    s += addressed ? " addressed" : " global";
    return s;
}

json primitive_to_json(const Primitive &p) {
    json j{
        {"kind", kind_name(p.kind)},
        {"targets", p.targets},
        {"addressed", p.addressed},
    };
    switch (p.kind) {
        case PrimitiveKind::CoherentCast:
            j["from"] = std::string(1, encoding_char(p.from));
            j["to"] = std::string(1, encoding_char(p.to));
            break;
        case PrimitiveKind::OpenPumpCast:
            j["to"] = std::string(1, encoding_char(p.to));
            break;
        case PrimitiveKind::ReadEnable:
            j["open_channel"] = p.open_channel;
            break;
        case PrimitiveKind::Gate1Q:
            j["axis"] = axis_name(p.axis);
            j["angle"] = p.angle;
            break;
        case PrimitiveKind::Gate2Q:
            j["gate"] = two_qubit_kind_name(p.pair_kind);
            j["angle"] = p.angle;
            break;
        case PrimitiveKind::HeraldedMPrep:
            j["max_attempts"] = p.max_attempts;
            break;
        case PrimitiveKind::RemoteEntangleAttempt:
            j["port"] = p.port;
            j["max_attempts"] = p.max_attempts;
            break;
        case PrimitiveKind::Idle:
            j["idle_s"] = p.idle_s;
            break;
        default:
            break;
    }
    return j;
}

Primitive primitive_from_json(const json &j) {
    try {
        Primitive p;
        p.kind = parse_kind(j.at("kind").get<std::string>());
        p.targets = j.at("targets").get<std::vector<size_t>>();
        p.addressed = j.at("addressed").get<bool>();
        if (j.contains("from")) {
            p.from = parse_encoding(j.at("from").get<std::string>());
        }
        if (j.contains("to")) {
            p.to = parse_encoding(j.at("to").get<std::string>());
        } else if (p.kind == PrimitiveKind::ReadEnable) {
            p.to = Encoding::O;
        }
        p.open_channel = j.value("open_channel", false);
        if (j.contains("axis")) {
            p.axis = parse_axis(j.at("axis").get<std::string>());
        }
        p.angle = j.value("angle", 0.0);
        if (j.contains("gate")) {
            p.pair_kind = parse_two_qubit_kind(j.at("gate").get<std::string>());
        }
        p.port = j.value("port", std::string());
        p.idle_s = j.value("idle_s", 0.0);
        p.max_attempts = j.value("max_attempts", 1);
        return p;
    } catch (const json::exception &e) {
        throw Error(ErrorCode::ParseError, std::string("primitive: ") + e.what());
    }
}

MachineConfig MachineConfig::defaults() {
    using enum PrimitiveKind;
    MachineConfig c;
    c.durations = {
        {CoherentCast, 10e-6},
        {OpenPumpCast, 10e-6},
        {HeraldedMPrep, 200e-6},
        {GPrep, 10e-6},
        {ReadEnable, 10e-6},
        {FluorescenceReadout, 200e-6},
        {Gate1Q, 10e-6},
        {Gate2Q, 10e-6},
        {Cool, 1e-3},
        {RemoteEntangleAttempt, 10e-6},
    };
    c.infidelities = {
        {Gate1Q, 1e-3},
        {Gate2Q, 1e-3},
        {HeraldedMPrep, 1e-3},
        {GPrep, 1e-3},
        {Cool, 0},
        {RemoteEntangleAttempt, 1e-3},
    };
    c.scatter_crosstalk_prob = 1e-3;
    c.herald_success_prob = 0.01;
    c.cast_infidelity_coherent = 1e-3;
    c.cast_infidelity_open = 1e-2;
    c.readout_error = 1e-3;
    c.prep_herald_success_prob = 0.9;
    return c;
}

MachineConfig MachineConfig::noiseless() {
    MachineConfig c = defaults();
    for (auto &[kind, p] : c.infidelities) {
        p = 0;
    }
    c.scatter_crosstalk_prob = 0;
    c.herald_success_prob = 1;
    c.cast_infidelity_coherent = 0;
    c.cast_infidelity_open = 0;
    c.readout_error = 0;
    c.prep_herald_success_prob = 1;
    return c;
}

void MachineConfig::validate() const {
    auto check_p = [](const std::string &name, double p) {
        if (!(p >= 0 && p <= 1)) {
            throw Error(ErrorCode::InvalidConfig, fmt::format("{} = {} is not a probability", name, p));
        }
    };
    for (const auto &[kind, d] : durations) {
        if (!(d >= 0) || !std::isfinite(d)) {
            throw Error(ErrorCode::InvalidConfig, fmt::format("duration of {} = {} s", kind_name(kind), d));
        }
    }
    for (const auto &[kind, p] : infidelities) {
        check_p("infidelity of " + kind_name(kind), p);
    }
    check_p("scatter_crosstalk_prob", scatter_crosstalk_prob);
    check_p("herald_success_prob", herald_success_prob);
    check_p("cast_infidelity_coherent", cast_infidelity_coherent);
    check_p("cast_infidelity_open", cast_infidelity_open);
    check_p("readout_error", readout_error);
    check_p("prep_herald_success_prob", prep_herald_success_prob);
    if (max_herald_attempts < 1 || max_prep_retries < 1) {
        throw Error(ErrorCode::InvalidConfig, "retry bounds must be >= 1");
    }
}

json MachineConfig::to_json() const {
    json d = json::object();
    for (const auto &[kind, v] : durations) {
        d[kind_name(kind)] = v;
    }
    json inf = json::object();
    for (const auto &[kind, v] : infidelities) {
        inf[kind_name(kind)] = v;
    }
    return json{
        {"durations", d},
        {"infidelities", inf},
        {"scatter_crosstalk_prob", scatter_crosstalk_prob},
        {"herald_success_prob", herald_success_prob},
        {"cast_infidelity_coherent", cast_infidelity_coherent},
        {"cast_infidelity_open", cast_infidelity_open},
        {"readout_error", readout_error},
        {"prep_herald_success_prob", prep_herald_success_prob},
        {"max_herald_attempts", max_herald_attempts},
        {"max_prep_retries", max_prep_retries},
    };
}

MachineConfig MachineConfig::from_json(const json &j) {
    if (!j.is_object()) {
        throw Error(ErrorCode::ParseError, "machine config must be a JSON object");
    }
    static const std::set<std::string> known{
        "durations",
        "infidelities",
        "scatter_crosstalk_prob",
        "herald_success_prob",
        "cast_infidelity_coherent",
        "cast_infidelity_open",
        "readout_error",
        "prep_herald_success_prob",
        "max_herald_attempts",
        "max_prep_retries",
    };
    for (const auto &[key, value] : j.items()) {
        if (!known.contains(key)) {
            throw Error(ErrorCode::ParseError, "machine config: unknown key '" + key + "'");
        }
    }
    MachineConfig c = defaults();
    try {
        if (j.contains("durations")) {
            for (const auto &[name, v] : j.at("durations").items()) {
                c.durations[parse_kind(name)] = v.get<double>();
            }
        }
        if (j.contains("infidelities")) {
            for (const auto &[name, v] : j.at("infidelities").items()) {
                c.infidelities[parse_kind(name)] = v.get<double>();
            }
        }
        c.scatter_crosstalk_prob = j.value("scatter_crosstalk_prob", c.scatter_crosstalk_prob);
        c.herald_success_prob = j.value("herald_success_prob", c.herald_success_prob);
        c.cast_infidelity_coherent = j.value("cast_infidelity_coherent", c.cast_infidelity_coherent);
        c.cast_infidelity_open = j.value("cast_infidelity_open", c.cast_infidelity_open);
        c.readout_error = j.value("readout_error", c.readout_error);
        c.prep_herald_success_prob = j.value("prep_herald_success_prob", c.prep_herald_success_prob);
        c.max_herald_attempts = j.value("max_herald_attempts", c.max_herald_attempts);
        c.max_prep_retries = j.value("max_prep_retries", c.max_prep_retries);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::ParseError, std::string("machine config: ") + e.what());
    }
    c.validate();
    return c;
}

MachineConfig MachineConfig::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open machine config '" + path + "'");
    }
    try {
        return from_json(json::parse(in));
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

namespace {

Legality illegal(std::string why) {
    return Legality{false, std::move(why)};
}

bool all_targets(const Primitive &p, const Crystal &c, Encoding e) {
    return std::all_of(p.targets.begin(), p.targets.end(), [&](size_t t) { return c.ions[t].encoding == e; });
}

std::string enc_str(Encoding e) {
    return std::string(1, encoding_char(e));
}

}  // namespace

Legality legal_in_mode(const Primitive &p, const Crystal &crystal) {
    std::set<size_t> seen;
    for (size_t t : p.targets) {
        if (t >= crystal.ions.size()) {
            return illegal(fmt::format("target {} outside crystal of {} ions", t, crystal.ions.size()));
        }
        if (!seen.insert(t).second) {
            return illegal(fmt::format("duplicate target {}", t));
        }
    }
    auto data_only = [&]() -> Legality {
        for (size_t t : p.targets) {
            if (crystal.ions[t].role != IonRole::Data) {
                return illegal(fmt::format("{} may not target coolant ion {}", kind_name(p.kind), t));
            }
        }
        return {};
    };
    const Mode &mode = crystal.mode;
    switch (p.kind) {
        case PrimitiveKind::Gate1Q:
        case PrimitiveKind::Gate2Q: {
            if (p.kind == PrimitiveKind::Gate2Q && p.targets.size() != 2) {
                return illegal("gate2q needs exactly 2 targets");
            }
            if (p.targets.empty()) {
                return illegal("gate1q needs at least one target");
            }
            if (auto d = data_only(); !d) {
                return d;
            }
            if (!all_targets(p, crystal, mode.gates)) {
                return illegal("gate encoding must be " + enc_str(mode.gates));
            }
            return {};
        }
        case PrimitiveKind::HeraldedMPrep:
        case PrimitiveKind::GPrep: {
            if (p.targets.empty()) {
                return illegal(kind_name(p.kind) + " needs at least one target");
            }
            if (auto d = data_only(); !d) {
                return d;
            }
            Encoding wanted = p.kind == PrimitiveKind::HeraldedMPrep ? Encoding::M : Encoding::G;
            if (mode.prep != wanted) {
                return illegal("preparation encoding must be " + enc_str(mode.prep));
            }
            return {};
        }
        case PrimitiveKind::ReadEnable:
            if (p.targets.empty()) {
                return illegal("read_enable needs at least one target");
            }
            if (auto d = data_only(); !d) {
                return d;
            }
            for (size_t t : p.targets) {
                if (crystal.ions[t].encoding == Encoding::O) {
                    return illegal(fmt::format("ion {} is already read-enabled", t));
                }
            }
            return {};
        case PrimitiveKind::FluorescenceReadout:
            if (p.targets.empty()) {
                return illegal("fluorescence_readout needs at least one target");
            }
            if (auto d = data_only(); !d) {
                return d;
            }
            if (!all_targets(p, crystal, Encoding::O)) {
                return illegal("readout requires targets read-enabled to O");
            }
            return {};
        case PrimitiveKind::CoherentCast:
            if (p.targets.empty()) {
                return illegal("cast needs at least one target");
            }
            if (p.from == p.to || p.from == Encoding::O || p.to == Encoding::O) {
                return illegal("coherent cast must convert between G and M");
            }
            if (!all_targets(p, crystal, p.from)) {
                return illegal("cast source encoding must be " + enc_str(p.from));
            }
            return {};
        case PrimitiveKind::OpenPumpCast:
            if (p.targets.empty()) {
                return illegal("cast needs at least one target");
            }
            if (p.to == Encoding::O) {
                return illegal("open-channel cast must end in G or M");
            }
            for (size_t t : p.targets) {
                if (crystal.ions[t].encoding == p.to) {
                    return illegal(fmt::format("ion {} already encoded as {}", t, enc_str(p.to)));
                }
            }
            return {};
        case PrimitiveKind::Cool:
            if (!all_targets(p, crystal, Encoding::G)) {
                return illegal("cooling targets must be G-encoded");
            }
            return {};
        case PrimitiveKind::RemoteEntangleAttempt:
            if (p.targets.size() != 1) {
                return illegal("remote entanglement targets exactly one ion");
            }
            if (auto d = data_only(); !d) {
                return d;
            }
            if (!all_targets(p, crystal, Encoding::G)) {
                return illegal("remote entanglement requires a G-encoded ion");
            }
            if (p.max_attempts < 1) {
                return illegal("remote entanglement block needs max_attempts >= 1");
            }
            return {};
        case PrimitiveKind::Idle:
            if (!(p.idle_s >= 0)) {
                return illegal("negative idle duration");
            }
            return {};
    }
    return illegal("unknown primitive");
}

double attempt_duration(const Primitive &p, const MachineConfig &cfg) {
    if (p.kind == PrimitiveKind::Idle) {
        if (!(p.idle_s >= 0)) {
            throw Error(ErrorCode::NegativeDuration, fmt::format("idle duration {} s", p.idle_s));
        }
        return p.idle_s;
    }
    auto it = cfg.durations.find(p.kind);
    if (it == cfg.durations.end()) {
        throw Error(ErrorCode::MissingDuration, kind_name(p.kind));
    }
    if (p.addressed) {
        return it->second * static_cast<double>(p.targets.size());
    }
    return it->second;
}

double duration_of(const Primitive &p, const MachineConfig &cfg) {
    double d = attempt_duration(p, cfg);
    if (p.kind == PrimitiveKind::RemoteEntangleAttempt) {
        double expected = cfg.herald_success_prob > 0 ? 1 / cfg.herald_success_prob : p.max_attempts;
        d *= std::min(expected, static_cast<double>(p.max_attempts));
    }
    return d;
}

std::optional<Manifold> dissipative_manifold(const Primitive &p, const Crystal &crystal) {
    switch (p.kind) {
        case PrimitiveKind::GPrep:
        case PrimitiveKind::HeraldedMPrep:
        case PrimitiveKind::FluorescenceReadout:
        case PrimitiveKind::Cool:
        case PrimitiveKind::RemoteEntangleAttempt:
            return Manifold::Ground;
        case PrimitiveKind::OpenPumpCast:
            // Population is pumped into the destination manifold; the
            // spontaneous photon is resonant with it.
            return p.to == Encoding::G ? Manifold::Ground : Manifold::Metastable;
        case PrimitiveKind::ReadEnable:
            if (!p.open_channel) {
                return std::nullopt;
            }
            if (!p.targets.empty() && p.targets.front() < crystal.ions.size() &&
                crystal.ions[p.targets.front()].encoding == Encoding::G) {
                return Manifold::Metastable;
            }
            return Manifold::Ground;
        default:
            return std::nullopt;
    }
}

std::string budget_key_name(BudgetKey key) {
    switch (key) {
        case BudgetKey::Decay:
            return "decay";
        case BudgetKey::Crosstalk:
            return "crosstalk";
        case BudgetKey::Readout:
            return "readout";
        case BudgetKey::Gate1Q:
            return "gate1q";
        case BudgetKey::Gate2Q:
            return "gate2q";
        case BudgetKey::CoherentCast:
            return "coherent_cast";
        case BudgetKey::OpenPumpCast:
            return "open_pump_cast";
        case BudgetKey::ReadEnable:
            return "read_enable";
        case BudgetKey::HeraldedMPrep:
            return "heralded_m_prep";
        case BudgetKey::GPrep:
            return "g_prep";
        case BudgetKey::Cool:
            return "cool";
        case BudgetKey::RemoteEntangle:
            return "remote_entangle";
        case BudgetKey::Count:
            break;
    }
    return "unknown";
}

namespace {

double infidelity(const MachineConfig &cfg, PrimitiveKind kind) {
    auto it = cfg.infidelities.find(kind);
    return it == cfg.infidelities.end() ? 0.0 : it->second;
}

}  // namespace

std::vector<ErrorChannel> error_channels_of(
    const Primitive &p, const Crystal &crystal, const MachineConfig &cfg, size_t source) {
    std::vector<ErrorChannel> out;
    auto live_data = [&](size_t ion) {
        const auto &s = crystal.ions.at(ion);
        return s.role == IonRole::Data && !s.leaked;
    };

    ChannelKind target_kind = ChannelKind::Depolarize;
    double target_p = 0;
    BudgetKey key = BudgetKey::Gate1Q;
    bool has_target_channel = true;
    switch (p.kind) {
        case PrimitiveKind::Gate1Q:
            target_p = infidelity(cfg, p.kind);
            key = BudgetKey::Gate1Q;
            break;
        case PrimitiveKind::Gate2Q:
            target_p = infidelity(cfg, p.kind);
            key = BudgetKey::Gate2Q;
            break;
        case PrimitiveKind::CoherentCast:
            target_p = cfg.cast_infidelity_coherent;
            key = BudgetKey::CoherentCast;
            break;
        case PrimitiveKind::OpenPumpCast:
            target_p = cfg.cast_infidelity_open;
            key = BudgetKey::OpenPumpCast;
            break;
        case PrimitiveKind::ReadEnable:
            target_p = p.open_channel ? cfg.cast_infidelity_open : cfg.cast_infidelity_coherent;
            key = BudgetKey::ReadEnable;
            break;
        case PrimitiveKind::HeraldedMPrep:
            target_p = infidelity(cfg, p.kind);
            key = BudgetKey::HeraldedMPrep;
            break;
        case PrimitiveKind::GPrep:
            target_p = infidelity(cfg, p.kind);
            key = BudgetKey::GPrep;
            break;
        case PrimitiveKind::FluorescenceReadout:
            target_kind = ChannelKind::ReadoutFlip;
            target_p = cfg.readout_error;
            key = BudgetKey::Readout;
            break;
        case PrimitiveKind::Cool:
            target_p = infidelity(cfg, p.kind);
            key = BudgetKey::Cool;
            break;
        case PrimitiveKind::RemoteEntangleAttempt:
            target_p = infidelity(cfg, p.kind);
            key = BudgetKey::RemoteEntangle;
            break;
        case PrimitiveKind::Idle:
            has_target_channel = false;
            break;
    }
    if (has_target_channel) {
        for (size_t t : p.targets) {
            if (live_data(t)) {
                out.push_back({target_kind, target_p, t, source, key});
            }
        }
    }

    if (auto manifold = dissipative_manifold(p, crystal)) {
        for (const auto &ion : crystal.ions) {
            bool is_target = std::find(p.targets.begin(), p.targets.end(), ion.index) != p.targets.end();
            if (!is_target && live_data(ion.index) && touches(ion.encoding, *manifold)) {
                out.push_back({ChannelKind::Depolarize, cfg.scatter_crosstalk_prob, ion.index, source, BudgetKey::Crosstalk});
            }
        }
    }

    const double dt = duration_of(p, cfg);
    const double decay = -std::expm1(-dt / crystal.species.m_lifetime_s);
    for (const auto &ion : crystal.ions) {
        if (live_data(ion.index) && touches(ion.encoding, Manifold::Metastable)) {
            out.push_back({ChannelKind::Leak, decay, ion.index, source, BudgetKey::Decay});
        }
    }
    return out;
}

}  // namespace omg
