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

#include "omg/state.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "omg/error.h"

namespace omg {

char encoding_char(Encoding e) {
    switch (e) {
        case Encoding::O:
            return 'O';
        case Encoding::M:
            return 'M';
        case Encoding::G:
            return 'G';
    }
    return '?';
}

Encoding parse_encoding(const std::string &text) {
    if (text.size() == 1) {
        switch (std::toupper(static_cast<unsigned char>(text[0]))) {
            case 'O':
                return Encoding::O;
            case 'M':
                return Encoding::M;
            case 'G':
                return Encoding::G;
        }
    }
    throw Error(ErrorCode::ParseError, "unknown encoding '" + text + "'");
}

std::string manifold_name(Manifold m) {
    return m == Manifold::Ground ? "ground" : "metastable";
}

bool Mode::is_supported() const {
    return *this == mmm() || *this == gmg() || *this == mgm();
}

std::string Mode::name() const {
    std::string s{encoding_char(prep), encoding_char(gates), encoding_char(storage)};
    for (auto &c : s) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

Mode Mode::parse(const std::string &name, bool allow_custom_modes) {
    if (name.size() != 3) {
        throw Error(ErrorCode::InvalidMode, "mode must be a triple such as mmm, gmg, mgm; got '" + name + "'");
    }
    Mode m;
    try {
        m = Mode{
            parse_encoding(name.substr(0, 1)),
            parse_encoding(name.substr(1, 1)),
            parse_encoding(name.substr(2, 1)),
        };
    } catch (const Error &) {
        throw Error(ErrorCode::InvalidMode, "unknown mode '" + name + "'");
    }
    if (!m.is_supported() && !allow_custom_modes) {
        throw Error(ErrorCode::InvalidMode, "unsupported mode '" + name + "' (expected mmm, gmg or mgm)");
    }
    return m;
}

size_t Crystal::data_ion_count() const {
    return static_cast<size_t>(
        std::count_if(ions.begin(), ions.end(), [](const IonState &s) { return s.role == IonRole::Data; }));
}

std::string Crystal::encodings() const {
    std::string s;
    for (const auto &ion : ions) {
        s.push_back(encoding_char(ion.encoding));
    }
    return s;
}

Crystal new_crystal(const SpeciesRecord &species, size_t n, Mode mode, bool allow_custom_modes) {
    if (!mode.is_supported() && !allow_custom_modes) {
        throw Error(ErrorCode::InvalidMode, "unsupported mode '" + mode.name() + "'");
    }
    if (n == 0) {
        throw Error(ErrorCode::InvalidCircuit, "a crystal needs at least one ion");
    }
    Crystal c{species, {}, mode};
    for (size_t k = 0; k < n; ++k) {
        c.ions.push_back(IonState{k, mode.storage, false, IonRole::Data});
    }
    return c;
}

size_t add_coolant_ion(Crystal &crystal) {
    size_t index = crystal.ions.size();
    crystal.ions.push_back(IonState{index, Encoding::G, false, IonRole::Coolant});
    return index;
}

Crystal set_encoding(Crystal crystal, size_t index, Encoding encoding) {
    if (index >= crystal.ions.size()) {
        throw Error(
            ErrorCode::IndexOutOfRange,
            "ion " + std::to_string(index) + " in a crystal of " + std::to_string(crystal.ions.size()));
    }
    crystal.ions[index].encoding = encoding;
    return crystal;
}

QuantumState::QuantumState(size_t num_qubits) : amps_(size_t{1} << num_qubits), leaked_(num_qubits, false) {
    if (num_qubits > kMaxSimulatedQubits) {
        throw Error(
            ErrorCode::CrystalTooLarge,
            std::to_string(num_qubits) + " qubits exceeds the limit of " + std::to_string(kMaxSimulatedQubits));
    }
    amps_[0] = 1;
}

size_t QuantumState::num_active() const {
    return static_cast<size_t>(std::count(leaked_.begin(), leaked_.end(), false));
}

size_t QuantumState::slot(size_t q) const {
    if (q >= leaked_.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "qubit " + std::to_string(q));
    }
    size_t s = 0;
    for (size_t k = 0; k < q; ++k) {
        s += !leaked_[k];
    }
    return s;
}

double QuantumState::norm_squared() const {
    double n = 0;
    for (const auto &a : amps_) {
        n += std::norm(a);
    }
    return n;
}

void QuantumState::rotate(size_t q, Pauli axis, double angle) {
    if (leaked_.at(q) || axis == Pauli::I) {
        return;
    }
    using C = std::complex<double>;
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    C m00, m01, m10, m11;
    switch (axis) {
        case Pauli::X:
            m00 = c, m01 = C(0, -s), m10 = C(0, -s), m11 = c;
            break;
        case Pauli::Y:
            m00 = c, m01 = -s, m10 = s, m11 = c;
            break;
        default:
            m00 = C(c, -s), m01 = 0, m10 = 0, m11 = C(c, s);
            break;
    }
    const size_t bit = size_t{1} << slot(q);
    for (size_t i = 0; i < amps_.size(); ++i) {
        if (i & bit) {
            continue;
        }
        C a0 = amps_[i];
        C a1 = amps_[i | bit];
        amps_[i] = m00 * a0 + m01 * a1;
        amps_[i | bit] = m10 * a0 + m11 * a1;
    }
}

void QuantumState::rotate_pair(size_t q1, size_t q2, Pauli pauli, double angle) {
    if (q1 == q2) {
        throw Error(ErrorCode::InvalidCircuit, "two-qubit rotation on a single qubit");
    }
    if (leaked_.at(q1) || leaked_.at(q2)) {
        return;
    }
    using C = std::complex<double>;
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    const size_t b1 = size_t{1} << slot(q1);
    const size_t b2 = size_t{1} << slot(q2);
    if (pauli == Pauli::Z) {
        const C same(c, -s);
        const C diff(c, s);
        for (size_t i = 0; i < amps_.size(); ++i) {
            bool parity = ((i & b1) != 0) != ((i & b2) != 0);
            amps_[i] *= parity ? diff : same;
        }
        return;
    }
    if (pauli != Pauli::X) {
        throw Error(ErrorCode::InvalidCircuit, "pair rotations support X and Z only");
    }
    const size_t flip = b1 | b2;
    for (size_t i = 0; i < amps_.size(); ++i) {
        size_t j = i ^ flip;
        if (j < i) {
            continue;
        }
        C ai = amps_[i];
        C aj = amps_[j];
        amps_[i] = c * ai + C(0, -s) * aj;
        amps_[j] = c * aj + C(0, -s) * ai;
    }
}

void QuantumState::apply_pauli(size_t q, Pauli p) {
    if (leaked_.at(q) || p == Pauli::I) {
        return;
    }
    const size_t bit = size_t{1} << slot(q);
    for (size_t i = 0; i < amps_.size(); ++i) {
        if (i & bit) {
            continue;
        }
        auto &a0 = amps_[i];
        auto &a1 = amps_[i | bit];
        switch (p) {
            case Pauli::X:
                std::swap(a0, a1);
                break;
            case Pauli::Y: {
                auto t = a0;
                a0 = std::complex<double>(0, -1) * a1;
                a1 = std::complex<double>(0, 1) * t;
                break;
            }
            case Pauli::Z:
                a1 = -a1;
                break;
            case Pauli::I:
                break;
        }
    }
}

double QuantumState::probability_one(size_t q) const {
    if (leaked_.at(q)) {
        return 0;
    }
    const size_t bit = size_t{1} << slot(q);
    double p = 0;
    for (size_t i = 0; i < amps_.size(); ++i) {
        if (i & bit) {
            p += std::norm(amps_[i]);
        }
    }
    return p;
}

double QuantumState::project(size_t q, bool outcome) {
    if (leaked_.at(q)) {
        throw Error(ErrorCode::IndexOutOfRange, "projecting leaked qubit " + std::to_string(q));
    }
    const size_t bit = size_t{1} << slot(q);
    double p = 0;
    for (size_t i = 0; i < amps_.size(); ++i) {
        if (((i & bit) != 0) == outcome) {
            p += std::norm(amps_[i]);
        } else {
            amps_[i] = 0;
        }
    }
    if (p > 0) {
        const double scale = 1 / std::sqrt(p);
        for (auto &a : amps_) {
            a *= scale;
        }
    }
    return p;
}

bool QuantumState::measure(size_t q, double uniform) {
    if (leaked_.at(q)) {
        return true;
    }
    bool outcome = uniform < probability_one(q);
    project(q, outcome);
    return outcome;
}

void QuantumState::reset(size_t q, double uniform) {
    reset_to(q, false, uniform);
}

void QuantumState::reset_to(size_t q, bool target, double uniform) {
    if (leaked_.at(q)) {
        return;
    }
    if (measure(q, uniform) != target) {
        apply_pauli(q, Pauli::X);
    }
}

void QuantumState::leak(size_t q, double uniform) {
    if (leaked_.at(q)) {
        return;
    }
    bool outcome = measure(q, uniform);
    const size_t s = slot(q);
    const size_t low = (size_t{1} << s) - 1;
    std::vector<std::complex<double>> kept(amps_.size() / 2);
    for (size_t k = 0; k < kept.size(); ++k) {
        size_t i = (k & low) | ((k & ~low) << 1) | (outcome ? (size_t{1} << s) : 0);
        kept[k] = amps_[i];
    }
    amps_ = std::move(kept);
    leaked_[q] = true;
}

std::vector<double> QuantumState::probabilities() const {
    std::vector<double> p(amps_.size());
    for (size_t i = 0; i < amps_.size(); ++i) {
        p[i] = std::norm(amps_[i]);
    }
    return p;
}

}  // namespace omg
