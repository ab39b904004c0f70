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

#include "omg/simulator.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "omg/error.h"

namespace omg {

namespace {

uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr size_t kMaxExactBranches = size_t{1} << 14;
constexpr double kBranchFloor = 1e-14;

}  // namespace

TrajectoryRng::TrajectoryRng(uint64_t seed, uint64_t stream)
    : state_(mix64(seed + 0x9E3779B97F4A7C15ULL) ^ mix64(~stream * 0xD1B54A32D192ED03ULL)) {
}

TrajectoryRng::result_type TrajectoryRng::operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
}

double TrajectoryRng::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

namespace {

struct Branch {
    double weight;
    QuantumState state;
    std::string bits;
};

class ExactRunner {
   public:
    explicit ExactRunner(size_t n) {
        branches_.push_back({1.0, QuantumState(n), {}});
    }

    void run(const Schedule &schedule) {
        for (const auto &item : schedule.items) {
            const Primitive &p = item.op;
            switch (p.kind) {
                case PrimitiveKind::HeraldedMPrep:
                case PrimitiveKind::GPrep:
                    for (size_t t : p.targets) {
                        if (t < schedule.n_data_ions) {
                            reset(t);
                        }
                    }
                    break;
                case PrimitiveKind::Gate1Q:
                    for (auto &b : branches_) {
                        for (size_t t : p.targets) {
                            b.state.rotate(t, p.axis, p.angle);
                        }
                    }
                    break;
                case PrimitiveKind::Gate2Q:
                    for (auto &b : branches_) {
                        b.state.rotate_pair(p.targets.at(0), p.targets.at(1), two_qubit_pauli(p.pair_kind), p.angle);
                    }
                    break;
                case PrimitiveKind::FluorescenceReadout:
                    for (size_t t : p.targets) {
                        measure(t);
                    }
                    break;
                case PrimitiveKind::RemoteEntangleAttempt:
                    reset(p.targets.at(0));
                    randomize(p.targets.at(0));
                    break;
                default:
                    break;
            }
        }
    }

    OutcomeDistribution distribution() const {
        OutcomeDistribution out;
        for (const auto &b : branches_) {
            out[b.bits] += b.weight;
        }
        return out;
    }

   private:
    // Splits every branch on the Z value of q; keep_bit records it.
    void split(size_t q, bool record, bool reset_after) {
        std::vector<Branch> next;
        for (auto &b : branches_) {
            const double p1 = b.state.probability_one(q);
            for (bool bit : {false, true}) {
                const double p = bit ? p1 : 1 - p1;
                if (p * b.weight < kBranchFloor * b.weight || p < kBranchFloor) {
                    continue;
                }
                Branch nb{b.weight * p, b.state, b.bits};
                nb.state.project(q, bit);
                if (reset_after && bit) {
                    nb.state.apply_pauli(q, Pauli::X);
                }
                if (record) {
                    nb.bits.push_back(bit ? '1' : '0');
                }
                next.push_back(std::move(nb));
            }
        }
        branches_ = std::move(next);
        merge();
    }

    void reset(size_t q) {
        split(q, false, true);
    }

    void measure(size_t q) {
        split(q, true, false);
    }

    // q is |0> in every branch; replace with an even mixture of |0> and |1>.
    void randomize(size_t q) {
        std::vector<Branch> next;
        for (auto &b : branches_) {
            Branch flipped{b.weight / 2, b.state, b.bits};
            flipped.state.apply_pauli(q, Pauli::X);
            b.weight /= 2;
            next.push_back(std::move(b));
            next.push_back(std::move(flipped));
        }
        branches_ = std::move(next);
        merge();
    }

    void merge() {
        std::vector<Branch> merged;
        for (auto &b : branches_) {
            bool absorbed = false;
            for (auto &m : merged) {
                if (m.bits != b.bits) {
                    continue;
                }
                std::complex<double> overlap = 0;
                const auto &x = m.state.amplitudes();
                const auto &y = b.state.amplitudes();
                for (size_t i = 0; i < x.size(); ++i) {
                    overlap += std::conj(x[i]) * y[i];
                }
                if (std::norm(overlap) > 1 - 1e-12) {
                    m.weight += b.weight;
                    absorbed = true;
                    break;
                }
            }
            if (!absorbed) {
                merged.push_back(std::move(b));
            }
        }
        branches_ = std::move(merged);
        if (branches_.size() > kMaxExactBranches) {
            throw Error(
                ErrorCode::CrystalTooLarge,
                fmt::format("exact simulation needs more than {} branches", kMaxExactBranches));
        }
    }

    std::vector<Branch> branches_;
};

}  // namespace

OutcomeDistribution simulate_exact(const Schedule &schedule) {
    if (schedule.n_data_ions > kMaxSimulatedQubits) {
        throw Error(
            ErrorCode::CrystalTooLarge,
            fmt::format("{} qubits exceeds the limit of {}", schedule.n_data_ions, kMaxSimulatedQubits));
    }
    ExactRunner runner(schedule.n_data_ions);
    runner.run(schedule);
    return runner.distribution();
}

namespace {

constexpr size_t kBudgetSlots = static_cast<size_t>(BudgetKey::Count);

struct Trajectory {
    std::string bits;
    bool leaky = false;
    bool failed = false;
    uint32_t prep_retries = 0;
    std::vector<uint32_t> herald_attempts;
    bool herald_exhausted = false;
    std::array<double, kBudgetSlots> budget{};
};

struct PendingEffect {
    double nominal_end;
    size_t item;
};

class TrajectoryRunner {
   public:
    TrajectoryRunner(const Schedule &schedule, const MachineConfig &cfg, TrajectoryRng rng)
        : schedule_(schedule),
          cfg_(cfg),
          rng_(rng),
          crystal_(schedule.initial_crystal()),
          state_(schedule.n_data_ions),
          tau_(schedule.species.m_lifetime_s) {
    }

    Trajectory run() {
        for (size_t k = 0; k < schedule_.items.size(); ++k) {
            execute(k);
        }
        advance_nominal(schedule_.total_duration_s);
        while (!pending_.empty()) {
            apply_pending(pending_.front());
            pending_.erase(pending_.begin());
        }
        out_.leaky = state_.num_active() != state_.num_qubits();
        out_.failed = out_.failed || out_.leaky;
        return std::move(out_);
    }

   private:
    double &budget(BudgetKey key) {
        return out_.budget[static_cast<size_t>(key)];
    }

    bool live(size_t ion) const {
        const auto &s = crystal_.ions[ion];
        return s.role == IonRole::Data && !s.leaked;
    }

    void integrate_to(double actual) {
        const double dt = actual - now_;
        if (dt <= 0) {
            return;
        }
        const double p = -std::expm1(-dt / tau_);
        for (auto &ion : crystal_.ions) {
            if (!live(ion.index) || !touches(ion.encoding, Manifold::Metastable)) {
                continue;
            }
            budget(BudgetKey::Decay) += p;
            if (rng_.uniform() < p) {
                ion.leaked = true;
                state_.leak(ion.index, rng_.uniform());
            }
        }
        now_ = actual;
    }

    void apply_pending(const PendingEffect &e) {
        integrate_to(e.nominal_end + shift_);
        apply_encoding_effect(schedule_.items[e.item].op, crystal_);
    }

    void advance_nominal(double nominal) {
        std::stable_sort(pending_.begin(), pending_.end(), [](const auto &a, const auto &b) {
            return a.nominal_end < b.nominal_end;
        });
        while (!pending_.empty() && pending_.front().nominal_end <= nominal) {
            PendingEffect e = pending_.front();
            pending_.erase(pending_.begin());
            apply_pending(e);
        }
        integrate_to(nominal + shift_);
    }

    void depolarize(size_t ion, double p, BudgetKey key) {
        budget(key) += p;
        if (p > 0 && rng_.uniform() < p) {
            static constexpr Pauli paulis[] = {Pauli::X, Pauli::Y, Pauli::Z};
            const double u = rng_.uniform();
            state_.apply_pauli(ion, paulis[std::min<size_t>(2, static_cast<size_t>(u * 3))]);
        }
    }

    /// Samples the non-decay channels of one application.
    void sample_channels(const Primitive &p, size_t k, size_t first_bit, bool crosstalk_only = false) {
        for (const auto &ch : error_channels_of(p, crystal_, cfg_, k)) {
            if (ch.kind == ChannelKind::Leak) {
                continue;
            }
            if (crosstalk_only && ch.budget != BudgetKey::Crosstalk) {
                continue;
            }
            if (ch.kind == ChannelKind::ReadoutFlip) {
                budget(ch.budget) += ch.p;
                if (ch.p > 0 && rng_.uniform() < ch.p) {
                    auto pos = std::find(p.targets.begin(), p.targets.end(), ch.ion) - p.targets.begin();
                    char &bit = out_.bits[first_bit + static_cast<size_t>(pos)];
                    bit = bit == '0' ? '1' : '0';
                }
                continue;
            }
            depolarize(ch.ion, ch.p, ch.budget);
        }
    }

    uint32_t heralded_attempts(double success, int max_attempts, bool &exhausted) {
        for (int a = 1; a <= max_attempts; ++a) {
            if (success >= 1 || rng_.uniform() < success) {
                exhausted = false;
                return static_cast<uint32_t>(a);
            }
        }
        exhausted = true;
        return static_cast<uint32_t>(max_attempts);
    }

    void execute(size_t k) {
        const ScheduledPrimitive &item = schedule_.items[k];
        const Primitive &p = item.op;
        advance_nominal(item.start_s);
        const size_t first_bit = out_.bits.size();
        double actual_duration = item.duration_s;

        switch (p.kind) {
            case PrimitiveKind::HeraldedMPrep: {
                bool exhausted = false;
                uint32_t attempts = heralded_attempts(cfg_.prep_herald_success_prob, p.max_attempts, exhausted);
                out_.prep_retries += attempts - 1;
                out_.failed |= exhausted;
                actual_duration = item.duration_s * attempts;
                for (size_t t : p.targets) {
                    state_.reset(t, rng_.uniform());
                }
                break;
            }
            case PrimitiveKind::GPrep:
                for (size_t t : p.targets) {
                    state_.reset(t, rng_.uniform());
                }
                break;
            case PrimitiveKind::Gate1Q:
                for (size_t t : p.targets) {
                    state_.rotate(t, p.axis, p.angle);
                }
                break;
            case PrimitiveKind::Gate2Q:
                state_.rotate_pair(p.targets.at(0), p.targets.at(1), two_qubit_pauli(p.pair_kind), p.angle);
                break;
            case PrimitiveKind::FluorescenceReadout:
                for (size_t t : p.targets) {
                    out_.bits.push_back(state_.measure(t, rng_.uniform()) ? '1' : '0');
                }
                break;
            case PrimitiveKind::RemoteEntangleAttempt: {
                bool exhausted = false;
                uint32_t attempts = heralded_attempts(cfg_.herald_success_prob, p.max_attempts, exhausted);
                out_.herald_attempts.push_back(attempts);
                out_.herald_exhausted |= exhausted;
                out_.failed |= exhausted;
                actual_duration = attempt_duration(p, cfg_) * attempts;
                // Every attempt scatters; the target channel applies once.
                for (uint32_t a = 1; a < attempts; ++a) {
                    sample_channels(p, k, first_bit, true);
                }
                const size_t q = p.targets.at(0);
                state_.reset_to(q, rng_.uniform() < 0.5, rng_.uniform());
                break;
            }
            default:
                break;
        }
        sample_channels(p, k, first_bit);

        if (actual_duration != item.duration_s) {
            integrate_to(now_ + actual_duration);
            shift_ += actual_duration - item.duration_s;
        }
        pending_.push_back({item.start_s + item.duration_s, k});
    }

    const Schedule &schedule_;
    const MachineConfig &cfg_;
    TrajectoryRng rng_;
    Crystal crystal_;
    QuantumState state_;
    double tau_;
    double now_ = 0;
    double shift_ = 0;
    std::vector<PendingEffect> pending_;
    Trajectory out_;
};

}  // namespace

SimResult simulate_mc(
    const Schedule &schedule, const MachineConfig &cfg, uint64_t shots, uint64_t seed, const SimOptions &options) {
    if (shots == 0) {
        throw Error(ErrorCode::InvalidShots, "shots must be >= 1");
    }
    if (schedule.n_data_ions > kMaxSimulatedQubits) {
        throw Error(
            ErrorCode::CrystalTooLarge,
            fmt::format("{} qubits exceeds the limit of {}", schedule.n_data_ions, kMaxSimulatedQubits));
    }
    cfg.validate();

    SimResult result;
    result.shots = shots;
    std::optional<OutcomeDistribution> support;
    if (options.ideal_bitstring) {
        result.fidelity_definition = "P(no leak, no exhausted herald, outcome == " + *options.ideal_bitstring + ")";
    } else if (options.use_exact_support) {
        try {
            support = simulate_exact(schedule);
            result.fidelity_definition = "P(no leak, no exhausted herald, outcome in noiseless support)";
        } catch (const Error &e) {
            if (e.code() != ErrorCode::CrystalTooLarge) {
                throw;
            }
        }
    }
    if (result.fidelity_definition.empty()) {
        result.fidelity_definition = "P(no leak, no exhausted herald)";
    }

    std::vector<Trajectory> trajectories(shots);
    const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(std::min<uint64_t>(shots, 1024))));
    auto work = [&](unsigned w) {
        for (uint64_t i = w; i < shots; i += workers) {
            trajectories[i] = TrajectoryRunner(schedule, cfg, TrajectoryRng(seed, i)).run();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }

    std::array<double, kBudgetSlots> budget{};
    uint64_t successes = 0, leaky = 0, failed = 0, attempts_total = 0;
    for (const auto &t : trajectories) {
        result.outcome_histogram[t.bits] += 1;
        for (size_t k = 0; k < kBudgetSlots; ++k) {
            budget[k] += t.budget[k];
        }
        leaky += t.leaky;
        failed += t.failed;
        result.prep_retries += t.prep_retries;
        for (uint32_t a : t.herald_attempts) {
            result.herald_attempt_stats.blocks += 1;
            attempts_total += a;
            result.herald_attempt_stats.max_attempts = std::max<uint64_t>(result.herald_attempt_stats.max_attempts, a);
        }
        result.herald_attempt_stats.exhausted += t.herald_exhausted;
        bool ok = !t.failed;
        if (ok && options.ideal_bitstring) {
            ok = t.bits == *options.ideal_bitstring;
        } else if (ok && support) {
            auto it = support->find(t.bits);
            ok = it != support->end() && it->second > 1e-12;
        }
        successes += ok;
    }
    const double n = static_cast<double>(shots);
    for (size_t k = 0; k < kBudgetSlots; ++k) {
        result.budget[budget_key_name(static_cast<BudgetKey>(k))] = budget[k] / n;
    }
    if (result.herald_attempt_stats.blocks > 0) {
        result.herald_attempt_stats.mean_attempts =
            static_cast<double>(attempts_total) / static_cast<double>(result.herald_attempt_stats.blocks);
    }
    result.leak_fraction = static_cast<double>(leaky) / n;
    result.failure_fraction = static_cast<double>(failed) / n;
    result.fidelity = static_cast<double>(successes) / n;
    result.fidelity_stderr = std::sqrt(result.fidelity * (1 - result.fidelity) / n);
    return result;
}

const ModeRow &ModeComparisonReport::row(const Mode &mode) const {
    for (const auto &r : rows) {
        if (r.mode == mode) {
            return r;
        }
    }
    throw Error(ErrorCode::InvalidMode, "no row for mode " + mode.name());
}

ModeComparisonReport compare_modes(
    const LogicalCircuit &circuit,
    const SpeciesRecord &species,
    const MachineConfig &cfg,
    uint64_t shots,
    uint64_t seed,
    const SimOptions &options,
    const LowerOptions &lower_options) {
    ModeComparisonReport report;
    report.species = species.name;
    report.shots = shots;
    report.seed = seed;
    for (const Mode &mode : {Mode::mmm(), Mode::gmg(), Mode::mgm()}) {
        Schedule schedule = lower(circuit, mode, species, cfg, lower_options);
        SimResult sim = simulate_mc(schedule, cfg, shots, seed, options);
        report.fidelity_definition = sim.fidelity_definition;
        ModeRow row;
        row.mode = mode;
        row.fidelity = sim.fidelity;
        row.fidelity_stderr = sim.fidelity_stderr;
        row.duration_s = schedule_duration(schedule);
        row.cast_applications = schedule.cast_applications();
        row.coherent_casts = schedule.count(PrimitiveKind::CoherentCast);
        row.exposures = validate_schedule(schedule).exposures.size();
        row.leak_fraction = sim.leak_fraction;
        row.budget = sim.budget;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace omg
