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

#include "support.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <vector>

namespace omg_test {

namespace {

using cd = std::complex<double>;
using Mat2 = std::array<std::array<cd, 2>, 2>;

class Density {
   public:
    explicit Density(size_t n) : n_(n), dim_(size_t{1} << n), rho_(dim_ * dim_, 0.0) {
        at(0, 0) = 1;
    }

    cd &at(size_t r, size_t c) {
        return rho_[r * dim_ + c];
    }
    cd at(size_t r, size_t c) const {
        return rho_[r * dim_ + c];
    }
    size_t dim() const {
        return dim_;
    }

    double trace() const {
        double t = 0;
        for (size_t i = 0; i < dim_; ++i) {
            t += at(i, i).real();
        }
        return t;
    }

    /// rho -> U rho U^dagger for a full-dimension U.
    void conjugate(const std::vector<cd> &u) {
        std::vector<cd> tmp(dim_ * dim_, 0.0), out(dim_ * dim_, 0.0);
        for (size_t i = 0; i < dim_; ++i) {
            for (size_t k = 0; k < dim_; ++k) {
                const cd uik = u[i * dim_ + k];
                if (uik == 0.0) {
                    continue;
                }
                for (size_t j = 0; j < dim_; ++j) {
                    tmp[i * dim_ + j] += uik * at(k, j);
                }
            }
        }
        for (size_t i = 0; i < dim_; ++i) {
            for (size_t j = 0; j < dim_; ++j) {
                cd s = 0;
                for (size_t k = 0; k < dim_; ++k) {
                    s += tmp[i * dim_ + k] * std::conj(u[j * dim_ + k]);
                }
                out[i * dim_ + j] = s;
            }
        }
        rho_ = std::move(out);
    }

    /// Keeps only the block where qubit q has value `bit`.
    Density projected(size_t q, bool bit) const {
        Density d = *this;
        for (size_t r = 0; r < dim_; ++r) {
            for (size_t c = 0; c < dim_; ++c) {
                if (((r >> q) & 1) != bit || ((c >> q) & 1) != bit) {
                    d.at(r, c) = 0;
                }
            }
        }
        return d;
    }

    void add(const Density &other) {
        for (size_t i = 0; i < rho_.size(); ++i) {
            rho_[i] += other.rho_[i];
        }
    }

    void scale(double s) {
        for (auto &x : rho_) {
            x *= s;
        }
    }

    size_t n() const {
        return n_;
    }

   private:
    size_t n_, dim_;
    std::vector<cd> rho_;
};

Mat2 pauli(omg::Pauli p) {
    const cd i(0, 1);
    switch (p) {
        case omg::Pauli::X:
            return {{{0, 1}, {1, 0}}};
        case omg::Pauli::Y:
            return {{{0, -i}, {i, 0}}};
        case omg::Pauli::Z:
            return {{{1, 0}, {0, -1}}};
        default:
            return {{{1, 0}, {0, 1}}};
    }
}

/// Full-register operator that applies m to qubit q.
std::vector<cd> embed1(size_t n, size_t q, const Mat2 &m) {
    const size_t dim = size_t{1} << n;
    std::vector<cd> u(dim * dim, 0.0);
    for (size_t r = 0; r < dim; ++r) {
        for (size_t c = 0; c < dim; ++c) {
            if ((r & ~(size_t{1} << q)) == (c & ~(size_t{1} << q))) {
                u[r * dim + c] = m[(r >> q) & 1][(c >> q) & 1];
            }
        }
    }
    return u;
}

std::vector<cd> matmul(const std::vector<cd> &a, const std::vector<cd> &b, size_t dim) {
    std::vector<cd> out(dim * dim, 0.0);
    for (size_t i = 0; i < dim; ++i) {
        for (size_t k = 0; k < dim; ++k) {
            for (size_t j = 0; j < dim; ++j) {
                out[i * dim + j] += a[i * dim + k] * b[k * dim + j];
            }
        }
    }
    return out;
}

/// exp(-i theta/2 P) = cos(theta/2) I - i sin(theta/2) P, with P a full operator.
std::vector<cd> exp_pauli(const std::vector<cd> &p, size_t dim, double theta) {
    std::vector<cd> u(dim * dim, 0.0);
    for (size_t i = 0; i < dim * dim; ++i) {
        u[i] = cd(0, -std::sin(theta / 2)) * p[i];
    }
    for (size_t i = 0; i < dim; ++i) {
        u[i * dim + i] += std::cos(theta / 2);
    }
    return u;
}

using Ensemble = std::map<std::string, Density>;

void for_each_state(Ensemble &e, const auto &f) {
    for (auto &[rec, rho] : e) {
        f(rho);
    }
}

void reset(Ensemble &e, size_t q) {
    const auto x = embed1(e.begin()->second.n(), q, pauli(omg::Pauli::X));
    for_each_state(e, [&](Density &rho) {
        Density zero = rho.projected(q, false);
        Density one = rho.projected(q, true);
        one.conjugate(x);
        zero.add(one);
        rho = zero;
    });
}

void measure(Ensemble &e, size_t q) {
    Ensemble next;
    for (auto &[rec, rho] : e) {
        for (bool bit : {false, true}) {
            Density d = rho.projected(q, bit);
            if (d.trace() > 1e-15) {
                next.emplace(rec + (bit ? '1' : '0'), d);
            }
        }
    }
    e = std::move(next);
}

}  // namespace

std::map<std::string, double> oracle_distribution(const omg::LogicalCircuit &circuit) {
    const size_t n = circuit.n_qubits;
    const size_t dim = size_t{1} << n;
    Ensemble e;
    e.emplace("", Density(n));
    for (const auto &ins : circuit.instructions) {
        switch (ins.op) {
            case omg::OpCode::PrepZ:
                reset(e, ins.q);
                break;
            case omg::OpCode::Gate1Q: {
                auto u = exp_pauli(embed1(n, ins.q, pauli(ins.axis)), dim, ins.angle);
                for_each_state(e, [&](Density &rho) { rho.conjugate(u); });
                break;
            }
            case omg::OpCode::Gate2Q: {
                const omg::Pauli p = ins.pair_kind == omg::TwoQubitKind::MS ? omg::Pauli::X : omg::Pauli::Z;
                auto pp = matmul(embed1(n, ins.q, pauli(p)), embed1(n, ins.q2, pauli(p)), dim);
                auto u = exp_pauli(pp, dim, ins.angle);
                for_each_state(e, [&](Density &rho) { rho.conjugate(u); });
                break;
            }
            case omg::OpCode::MidMeasure:
                measure(e, ins.q);
                reset(e, ins.q);
                break;
            case omg::OpCode::FinalMeasure:
                for (size_t q : ins.qubits) {
                    measure(e, q);
                }
                break;
            case omg::OpCode::RemoteEntangle: {
                reset(e, ins.q);
                const auto x = embed1(n, ins.q, pauli(omg::Pauli::X));
                for_each_state(e, [&](Density &rho) {
                    Density flipped = rho;
                    flipped.conjugate(x);
                    rho.add(flipped);
                    rho.scale(0.5);
                });
                break;
            }
            case omg::OpCode::Cool:
            case omg::OpCode::Idle:
                break;
        }
    }
    std::map<std::string, double> out;
    for (const auto &[rec, rho] : e) {
        out[rec] = rho.trace();
    }
    return out;
}

omg::LogicalCircuit random_circuit(std::mt19937_64 &rng, const RandomCircuitOptions &options) {
    auto uniform_int = [&](size_t lo, size_t hi) {
        return std::uniform_int_distribution<size_t>(lo, hi)(rng);
    };
    auto uniform_real = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    omg::LogicalCircuit c;
    c.n_qubits = uniform_int(1, options.max_qubits);
    const size_t length = uniform_int(1, options.max_instructions);
    const bool final_measure = uniform_int(0, 9) < 8;
    std::vector<size_t> final_qubits;
    if (final_measure) {
        for (size_t q = 0; q < c.n_qubits; ++q) {
            if (uniform_int(0, 2) > 0) {
                final_qubits.push_back(q);
            }
        }
        if (final_qubits.empty() || uniform_int(0, 1) == 0) {
            final_qubits.clear();
            for (size_t q = 0; q < c.n_qubits; ++q) {
                final_qubits.push_back(q);
            }
        }
    }
    size_t bits = final_qubits.size();
    const size_t body = final_measure ? length - 1 : length;
    auto angle = [&] {
        if (uniform_int(0, 3) == 0) {
            return static_cast<double>(static_cast<int>(uniform_int(0, 7)) - 4) * std::numbers::pi / 2;
        }
        return uniform_real(-std::numbers::pi, std::numbers::pi);
    };
    while (c.instructions.size() < body) {
        const size_t q = uniform_int(0, c.n_qubits - 1);
        switch (uniform_int(0, 7)) {
            case 0:
                c.instructions.push_back(omg::Instruction::prep_z(q));
                break;
            case 1:
            case 2: {
                static constexpr omg::Pauli axes[] = {omg::Pauli::X, omg::Pauli::Y, omg::Pauli::Z};
                c.instructions.push_back(omg::Instruction::gate1q(q, axes[uniform_int(0, 2)], angle()));
                break;
            }
            case 3:
                if (c.n_qubits >= 2) {
                    size_t q2 = uniform_int(0, c.n_qubits - 2);
                    q2 += q2 >= q;
                    auto kind = uniform_int(0, 1) ? omg::TwoQubitKind::MS : omg::TwoQubitKind::ZZ;
                    c.instructions.push_back(omg::Instruction::gate2q(q, q2, kind, angle()));
                }
                break;
            case 4:
                if (bits < options.max_measured_bits) {
                    c.instructions.push_back(omg::Instruction::mid_measure(q));
                    ++bits;
                }
                break;
            case 5:
                c.instructions.push_back(omg::Instruction::cool());
                break;
            case 6:
                if (bits < options.max_measured_bits && c.instructions.size() + 2 <= body) {
                    c.instructions.push_back(omg::Instruction::remote_entangle(q, "port" + std::to_string(q)));
                    c.instructions.push_back(omg::Instruction::mid_measure(q));
                    ++bits;
                }
                break;
            case 7:
                c.instructions.push_back(omg::Instruction::idle(uniform_real(0, options.max_idle_s)));
                break;
        }
    }
    if (final_measure) {
        c.instructions.push_back(omg::Instruction::final_measure(final_qubits));
    }
    return c;
}

double smoothed_sigma(double fraction, uint64_t n) {
    const double nd = static_cast<double>(n);
    const double p = (fraction * nd + 0.5) / (nd + 1);
    return std::sqrt(p * (1 - p) / nd);
}

double max_abs_difference(const std::map<std::string, double> &a, const std::map<std::string, double> &b) {
    std::set<std::string> keys;
    for (const auto &[k, v] : a) {
        keys.insert(k);
    }
    for (const auto &[k, v] : b) {
        keys.insert(k);
    }
    double worst = 0;
    for (const auto &k : keys) {
        auto ia = a.find(k);
        auto ib = b.find(k);
        const double va = ia == a.end() ? 0 : ia->second;
        const double vb = ib == b.end() ? 0 : ib->second;
        worst = std::max(worst, std::abs(va - vb));
    }
    return worst;
}

}  // namespace omg_test
