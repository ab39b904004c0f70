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

#include "omg/compiler.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "omg/error.h"

using nlohmann::json;

namespace omg {

Crystal Schedule::initial_crystal() const {
    Crystal c = new_crystal(species, n_data_ions, mode, true);
    for (size_t k = 0; k < n_coolant_ions; ++k) {
        add_coolant_ion(c);
    }
    return c;
}

size_t Schedule::count(PrimitiveKind kind) const {
    return static_cast<size_t>(std::count_if(items.begin(), items.end(), [&](const ScheduledPrimitive &s) {
        return s.op.kind == kind;
    }));
}

size_t Schedule::cast_applications() const {
    size_t n = 0;
    for (const auto &s : items) {
        if (s.op.is_cast()) {
            n += s.op.targets.size();
        }
    }
    return n;
}

size_t Schedule::measured_bits() const {
    size_t n = 0;
    for (const auto &s : items) {
        if (s.op.kind == PrimitiveKind::FluorescenceReadout) {
            n += s.op.targets.size();
        }
    }
    return n;
}

void apply_encoding_effect(const Primitive &p, Crystal &crystal) {
    std::optional<Encoding> next;
    switch (p.kind) {
        case PrimitiveKind::CoherentCast:
        case PrimitiveKind::OpenPumpCast:
            next = p.to;
            break;
        case PrimitiveKind::ReadEnable:
            next = Encoding::O;
            break;
        case PrimitiveKind::HeraldedMPrep:
            next = Encoding::M;
            break;
        case PrimitiveKind::GPrep:
        case PrimitiveKind::RemoteEntangleAttempt:
            next = Encoding::G;
            break;
        default:
            break;
    }
    if (next) {
        for (size_t t : p.targets) {
            crystal.ions.at(t).encoding = *next;
        }
    }
}

void finalize_schedule(Schedule &schedule) {
    auto lowest = [](const Primitive &p) {
        return p.targets.empty() ? size_t(-1) : *std::min_element(p.targets.begin(), p.targets.end());
    };
    std::stable_sort(schedule.items.begin(), schedule.items.end(), [&](const auto &a, const auto &b) {
        if (a.start_s != b.start_s) {
            return a.start_s < b.start_s;
        }
        return lowest(a.op) < lowest(b.op);
    });
    schedule.total_duration_s = 0;
    for (const auto &s : schedule.items) {
        schedule.total_duration_s = std::max(schedule.total_duration_s, s.end_s());
    }
}

namespace {

std::vector<size_t> iota_vec(size_t n) {
    std::vector<size_t> v(n);
    std::iota(v.begin(), v.end(), size_t{0});
    return v;
}

class Lowerer {
   public:
    Lowerer(const LogicalCircuit &circuit, Mode mode, const SpeciesRecord &species, const MachineConfig &cfg,
            const LowerOptions &options)
        : circuit_(circuit),
          cfg_(cfg),
          options_(options),
          crystal_(new_crystal(species, circuit.n_qubits, mode)) {
        schedule_.species = species;
        schedule_.mode = mode;
        schedule_.n_data_ions = circuit.n_qubits;
        if (circuit.has_cool()) {
            coolant_ = add_coolant_ion(crystal_);
            schedule_.n_coolant_ions = 1;
        }
        concurrent_cooling_ = mode == Mode::mmm();
    }

    Schedule run() {
        const Mode &mode = crystal_.mode;
        for (size_t k = 0; k < circuit_.instructions.size(); ++k) {
            index_ = k;
            const Instruction &ins = circuit_.instructions[k];
            if (mode == Mode::mmm()) {
                lower_mmm(ins);
            } else if (mode == Mode::gmg()) {
                lower_gmg(ins);
            } else {
                lower_mgm(ins);
            }
            if (ins.op != OpCode::PrepZ && ins.op != OpCode::Cool && ins.op != OpCode::Idle) {
                leading_ = false;
            }
        }
        finalize_schedule(schedule_);
        return std::move(schedule_);
    }

   private:
    [[noreturn]] void unsupported(const std::string &why) const {
        throw Error(
            ErrorCode::UnsupportedInstruction,
            fmt::format(
                "instruction {} ({}) in mode {}: {}",
                index_,
                op_name(circuit_.instructions[index_].op),
                crystal_.mode.name(),
                why));
    }

    Encoding enc(size_t ion) const {
        return crystal_.ions[ion].encoding;
    }

    std::vector<size_t> data_ions() const {
        return iota_vec(circuit_.n_qubits);
    }

    std::vector<size_t> data_except(const std::vector<size_t> &excluded) const {
        std::vector<size_t> out;
        for (size_t q = 0; q < circuit_.n_qubits; ++q) {
            if (std::find(excluded.begin(), excluded.end(), q) == excluded.end()) {
                out.push_back(q);
            }
        }
        return out;
    }

    void emit(const Primitive &p) {
        if (auto legal = legal_in_mode(p, crystal_); !legal) {
            unsupported(p.str() + " is illegal: " + legal.diagnostic);
        }
        if (auto manifold = dissipative_manifold(p, crystal_)) {
            for (const auto &ion : crystal_.ions) {
                bool target = std::find(p.targets.begin(), p.targets.end(), ion.index) != p.targets.end();
                if (!target && ion.role == IonRole::Data && touches(ion.encoding, *manifold)) {
                    unsupported(fmt::format(
                        "{} would expose {}-encoded ion {} to {} light",
                        kind_name(p.kind),
                        encoding_char(ion.encoding),
                        ion.index,
                        manifold_name(*manifold)));
                }
            }
        }
        const double duration = duration_of(p, cfg_);
        double start;
        if (concurrent_cooling_ && p.kind == PrimitiveKind::Gate1Q && p.addressed) {
            start = std::max(barrier_end_, gate_end_);
            gate_end_ = start + duration;
        } else if (concurrent_cooling_ && p.kind == PrimitiveKind::Cool && p.addressed) {
            start = std::max(barrier_end_, cool_end_);
            cool_end_ = start + duration;
        } else {
            start = std::max({barrier_end_, gate_end_, cool_end_});
            barrier_end_ = start + duration;
        }
        schedule_.items.push_back({start, duration, p});
        apply_encoding_effect(p, crystal_);
    }

    /// Casts the G-encoded ions among `ions` to M; returns those cast.
    std::vector<size_t> protect(const std::vector<size_t> &ions) {
        std::vector<size_t> cast;
        for (size_t q : ions) {
            if (enc(q) == Encoding::G) {
                cast.push_back(q);
            }
        }
        if (!cast.empty()) {
            emit(Primitive::coherent_cast(cast, Encoding::G, Encoding::M));
        }
        return cast;
    }

    void restore(const std::vector<size_t> &ions) {
        if (!ions.empty()) {
            emit(Primitive::coherent_cast(ions, Encoding::M, Encoding::G));
        }
    }

    void require_encoding(size_t q, Encoding e) {
        if (enc(q) != e) {
            unsupported(fmt::format(
                "qubit {} is {}-encoded and cannot be converted to {} in this mode",
                q,
                encoding_char(enc(q)),
                encoding_char(e)));
        }
    }

    Primitive heralded_prep(std::vector<size_t> targets) const {
        return Primitive::heralded_m_prep(std::move(targets), true, cfg_.max_prep_retries + 1);
    }

    Primitive remote_block(const Instruction &ins) const {
        return Primitive::remote_entangle(ins.q, ins.port, cfg_.max_herald_attempts);
    }

    Primitive cool_coolant() const {
        return Primitive::cool({coolant_}, true);
    }

    // {m,m,m}: everything addressed on m qubits, no coherent casts at all. A
    // heralded remote-entanglement qubit stays g until measured or re-prepared.
    void lower_mmm(const Instruction &ins) {
        switch (ins.op) {
            case OpCode::PrepZ:
                emit(heralded_prep({ins.q}));
                break;
            case OpCode::Gate1Q:
                require_encoding(ins.q, Encoding::M);
                emit(Primitive::gate1q(ins.q, ins.axis, ins.angle, true));
                break;
            case OpCode::Gate2Q:
                require_encoding(ins.q, Encoding::M);
                require_encoding(ins.q2, Encoding::M);
                emit(Primitive::gate2q(ins.q, ins.q2, ins.pair_kind, ins.angle, true));
                break;
            case OpCode::MidMeasure:
                emit(Primitive::read_enable({ins.q}, enc(ins.q) == Encoding::M, true));
                emit(Primitive::fluorescence_readout({ins.q}));
                emit(heralded_prep({ins.q}));
                break;
            case OpCode::FinalMeasure:
                read_enable_by_encoding(ins.qubits);
                emit(Primitive::fluorescence_readout(ins.qubits));
                break;
            case OpCode::Cool:
                emit(cool_coolant());
                break;
            case OpCode::RemoteEntangle:
                if (enc(ins.q) != Encoding::G) {
                    emit(Primitive::open_pump_cast({ins.q}, Encoding::G));
                }
                emit(remote_block(ins));
                break;
            case OpCode::Idle:
                emit(Primitive::idle(ins.duration_s));
                break;
        }
    }

    void read_enable_by_encoding(const std::vector<size_t> &qubits) {
        std::vector<size_t> from_m, from_g;
        for (size_t q : qubits) {
            (enc(q) == Encoding::M ? from_m : from_g).push_back(q);
        }
        if (!from_m.empty()) {
            emit(Primitive::read_enable(from_m, true, true));
        }
        if (!from_g.empty()) {
            emit(Primitive::read_enable(from_g, false, true));
        }
    }

    // {g,m,g}: storage in g, gates on m with global beams; dissipative steps
    // first park every other data ion in m.
    void lower_gmg(const Instruction &ins) {
        const bool boundary = options_.boundary_direct && leading_;
        switch (ins.op) {
            case OpCode::PrepZ:
                if (boundary) {
                    if (schedule_.items.empty() || schedule_.items.back().op != Primitive::g_prep(data_ions(), false)) {
                        emit(Primitive::g_prep(data_ions(), false));
                    }
                } else {
                    auto parked = protect(data_except({ins.q}));
                    emit(Primitive::g_prep({ins.q}, true));
                    restore(parked);
                }
                break;
            case OpCode::Gate1Q:
                emit(Primitive::coherent_cast({ins.q}, Encoding::G, Encoding::M));
                emit(Primitive::gate1q(ins.q, ins.axis, ins.angle, false));
                emit(Primitive::coherent_cast({ins.q}, Encoding::M, Encoding::G));
                break;
            case OpCode::Gate2Q:
                emit(Primitive::coherent_cast({ins.q, ins.q2}, Encoding::G, Encoding::M));
                emit(Primitive::gate2q(ins.q, ins.q2, ins.pair_kind, ins.angle, false));
                emit(Primitive::coherent_cast({ins.q, ins.q2}, Encoding::M, Encoding::G));
                break;
            case OpCode::MidMeasure: {
                auto parked = protect(data_except({ins.q}));
                emit(Primitive::read_enable({ins.q}, false, true));
                emit(Primitive::fluorescence_readout({ins.q}));
                emit(Primitive::g_prep({ins.q}, true));
                restore(parked);
                break;
            }
            case OpCode::FinalMeasure:
                if (options_.boundary_direct && ins.qubits.size() == circuit_.n_qubits) {
                    emit(Primitive::read_enable(ins.qubits, false, false));
                } else {
                    protect(data_except(ins.qubits));
                    emit(Primitive::read_enable(ins.qubits, false, true));
                }
                emit(Primitive::fluorescence_readout(ins.qubits));
                break;
            case OpCode::Cool:
                if (boundary) {
                    auto targets = data_ions();
                    targets.push_back(coolant_);
                    emit(Primitive::cool(targets, false));
                    emit(Primitive::g_prep(data_ions(), false));
                } else {
                    auto parked = protect(data_ions());
                    emit(cool_coolant());
                    restore(parked);
                }
                break;
            case OpCode::RemoteEntangle: {
                auto parked = protect(data_except({ins.q}));
                emit(remote_block(ins));
                restore(parked);
                break;
            }
            case OpCode::Idle:
                emit(Primitive::idle(ins.duration_s));
                break;
        }
    }

    // {m,g,m}: storage in m; only the ions involved in an operation are cast.
    void lower_mgm(const Instruction &ins) {
        switch (ins.op) {
            case OpCode::PrepZ:
                emit(heralded_prep({ins.q}));
                break;
            case OpCode::Gate1Q:
                emit(Primitive::coherent_cast({ins.q}, Encoding::M, Encoding::G));
                emit(Primitive::gate1q(ins.q, ins.axis, ins.angle, false));
                emit(Primitive::coherent_cast({ins.q}, Encoding::G, Encoding::M));
                break;
            case OpCode::Gate2Q:
                emit(Primitive::coherent_cast({ins.q, ins.q2}, Encoding::M, Encoding::G));
                emit(Primitive::gate2q(ins.q, ins.q2, ins.pair_kind, ins.angle, false));
                emit(Primitive::coherent_cast({ins.q, ins.q2}, Encoding::G, Encoding::M));
                break;
            case OpCode::MidMeasure:
                emit(Primitive::read_enable({ins.q}, true, true));
                emit(Primitive::fluorescence_readout({ins.q}));
                emit(heralded_prep({ins.q}));
                break;
            case OpCode::FinalMeasure:
                emit(Primitive::read_enable(ins.qubits, true, true));
                emit(Primitive::fluorescence_readout(ins.qubits));
                break;
            case OpCode::Cool:
                emit(cool_coolant());
                break;
            case OpCode::RemoteEntangle:
                emit(Primitive::open_pump_cast({ins.q}, Encoding::G));
                emit(remote_block(ins));
                emit(Primitive::coherent_cast({ins.q}, Encoding::G, Encoding::M));
                break;
            case OpCode::Idle:
                emit(Primitive::idle(ins.duration_s));
                break;
        }
    }

    const LogicalCircuit &circuit_;
    const MachineConfig &cfg_;
    LowerOptions options_;
    Crystal crystal_;
    Schedule schedule_;
    size_t coolant_ = 0;
    size_t index_ = 0;
    bool leading_ = true;
    bool concurrent_cooling_ = false;
    double barrier_end_ = 0;
    double gate_end_ = 0;
    double cool_end_ = 0;
};

}  // namespace

Schedule lower(
    const LogicalCircuit &circuit,
    Mode mode,
    const SpeciesRecord &species,
    const MachineConfig &cfg,
    const LowerOptions &options) {
    if (!mode.is_supported()) {
        throw Error(ErrorCode::InvalidMode, "no lowering rules for mode '" + mode.name() + "'");
    }
    if (circuit.n_qubits > kMaxSimulatedQubits) {
        throw Error(
            ErrorCode::CrystalTooLarge,
            fmt::format("{} qubits exceeds the limit of {}", circuit.n_qubits, kMaxSimulatedQubits));
    }
    circuit.validate();
    cfg.validate();
    return Lowerer(circuit, mode, species, cfg, options).run();
}

std::string ProtectionReport::summary() const {
    std::ostringstream out;
    out << (is_protected() ? "protected" : "NOT protected") << ": " << exposures.size() << " exposure(s)";
    if (!diagnostics.empty()) {
        out << ", " << diagnostics.size() << " diagnostic(s)";
    }
    out << '\n';
    for (const auto &e : exposures) {
        out << fmt::format(
            "  t={}s item {} {}: ion {} ({}) exposed to {} light\n",
            e.time_s,
            e.item,
            kind_name(e.kind),
            e.ion,
            encoding_char(e.encoding),
            manifold_name(e.manifold));
    }
    for (const auto &d : diagnostics) {
        out << "  " << d << '\n';
    }
    return out.str();
}

ProtectionReport validate_schedule(const Schedule &schedule, const Crystal &initial) {
    ProtectionReport report;
    Crystal crystal = initial;
    const double eps = 1e-15;
    for (size_t k = 0; k < schedule.items.size(); ++k) {
        const auto &item = schedule.items[k];
        const Primitive &p = item.op;
        if (k > 0 && item.start_s < schedule.items[k - 1].start_s) {
            report.diagnostics.push_back(fmt::format("item {} starts before item {}", k, k - 1));
        }
        for (size_t j = 0; j < k; ++j) {
            const auto &other = schedule.items[j];
            bool overlap = other.end_s() > item.start_s + eps && item.end_s() > other.start_s + eps;
            if (!overlap) {
                continue;
            }
            bool shared = p.is_global() || other.op.is_global();
            for (size_t t : p.targets) {
                shared |= std::find(other.op.targets.begin(), other.op.targets.end(), t) != other.op.targets.end();
            }
            // Only the gate beam and the cooling beam run side by side.
            const bool separate_beams = (p.kind == PrimitiveKind::Gate1Q && other.op.kind == PrimitiveKind::Cool) ||
                                        (p.kind == PrimitiveKind::Cool && other.op.kind == PrimitiveKind::Gate1Q);
            if (shared || !separate_beams) {
                report.diagnostics.push_back(fmt::format("items {} and {} overlap in time", j, k));
            }
        }
        if (auto legal = legal_in_mode(p, crystal); !legal) {
            report.diagnostics.push_back(fmt::format("item {} ({}): {}", k, p.str(), legal.diagnostic));
        }
        if (auto manifold = dissipative_manifold(p, crystal)) {
            for (const auto &ion : crystal.ions) {
                bool target = std::find(p.targets.begin(), p.targets.end(), ion.index) != p.targets.end();
                if (!target && ion.role == IonRole::Data && touches(ion.encoding, *manifold)) {
                    report.exposures.push_back({item.start_s, k, p.kind, ion.index, ion.encoding, *manifold});
                }
            }
        }
        bool in_range = std::all_of(p.targets.begin(), p.targets.end(), [&](size_t t) {
            return t < crystal.ions.size();
        });
        if (in_range) {
            apply_encoding_effect(p, crystal);
        }
    }
    return report;
}

ProtectionReport validate_schedule(const Schedule &schedule) {
    return validate_schedule(schedule, schedule.initial_crystal());
}

double schedule_duration(const Schedule &schedule) {
    return schedule.total_duration_s;
}

Schedule concatenate(const Schedule &first, const Schedule &second) {
    Schedule out = first;
    const double offset = first.total_duration_s;
    for (auto item : second.items) {
        item.start_s += offset;
        out.items.push_back(item);
    }
    out.n_data_ions = std::max(first.n_data_ions, second.n_data_ions);
    out.n_coolant_ions = std::max(first.n_coolant_ions, second.n_coolant_ions);
    out.total_duration_s = first.total_duration_s + second.total_duration_s;
    return out;
}

json schedule_to_json(const Schedule &schedule) {
    json items = json::array();
    for (const auto &s : schedule.items) {
        json j = primitive_to_json(s.op);
        j["start_s"] = s.start_s;
        j["duration_s"] = s.duration_s;
        items.push_back(j);
    }
    return json{
        {"species", schedule.species.name},
        {"species_record", json::parse(record_to_json(schedule.species).dump())},
        {"mode", schedule.mode.name()},
        {"n_data_ions", schedule.n_data_ions},
        {"n_coolant_ions", schedule.n_coolant_ions},
        {"total_duration_s", schedule.total_duration_s},
        {"items", items},
    };
}

Schedule schedule_from_json(const json &j) {
    Schedule s;
    try {
        const std::string label = j.at("species").get<std::string>();
        s.species = record_from_json(label, nlohmann::ordered_json::parse(j.at("species_record").dump()));
        s.mode = Mode::parse(j.at("mode").get<std::string>());
        s.n_data_ions = j.at("n_data_ions").get<size_t>();
        s.n_coolant_ions = j.value("n_coolant_ions", size_t{0});
        for (const auto &e : j.at("items")) {
            s.items.push_back({e.at("start_s").get<double>(), e.at("duration_s").get<double>(), primitive_from_json(e)});
        }
        s.total_duration_s = j.at("total_duration_s").get<double>();
    } catch (const json::exception &e) {
        throw Error(ErrorCode::ParseError, std::string("schedule: ") + e.what());
    }
    if (s.n_data_ions == 0) {
        throw Error(ErrorCode::ParseError, "schedule: n_data_ions must be >= 1");
    }
    if (s.n_data_ions > kMaxSimulatedQubits) {
        throw Error(ErrorCode::CrystalTooLarge, fmt::format("schedule has {} data ions", s.n_data_ions));
    }
    return s;
}

std::string timeline_csv(const Schedule &schedule) {
    std::string out = "start_s,duration_s,kind,targets,addressed\n";
    for (const auto &s : schedule.items) {
        out += fmt::format(
            "{},{},{},{},{}\n",
            s.start_s,
            s.duration_s,
            kind_name(s.op.kind),
            fmt::join(s.op.targets, " "),
            s.op.addressed ? "true" : "false");
    }
    return out;
}

}  // namespace omg
