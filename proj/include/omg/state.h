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

#ifndef OMG_STATE_H
#define OMG_STATE_H

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "omg/species.h"

namespace omg {

/// Largest register the exact and trajectory simulators accept.
inline constexpr size_t kMaxSimulatedQubits = 12;

enum class Encoding { O, M, G };

char encoding_char(Encoding e);
Encoding parse_encoding(const std::string &text);

/// Which electronic manifold a laser or scattered photon couples to.
enum class Manifold { Ground, Metastable };

std::string manifold_name(Manifold m);

/// o spans one ground and one metastable level, so it touches both.
inline bool touches(Encoding e, Manifold m) {
    switch (e) {
        case Encoding::O:
            return true;
        case Encoding::M:
            return m == Manifold::Metastable;
        case Encoding::G:
            return m == Manifold::Ground;
    }
    return true;
}

/// Qubit types used for {state preparation, gates, storage}.
struct Mode {
    Encoding prep = Encoding::M;
    Encoding gates = Encoding::M;
    Encoding storage = Encoding::M;

    static Mode mmm() {
        return {Encoding::M, Encoding::M, Encoding::M};
    }
    static Mode gmg() {
        return {Encoding::G, Encoding::M, Encoding::G};
    }
    static Mode mgm() {
        return {Encoding::M, Encoding::G, Encoding::M};
    }

    bool is_supported() const;
    /// "mmm", "gmg", "mgm", or the lowercase triple for custom modes.
    std::string name() const;
    static Mode parse(const std::string &name, bool allow_custom_modes = false);

    bool operator==(const Mode &) const = default;
};

/// Coolant ions carry no logical qubit; they exist to be laser cooled.
enum class IonRole { Data, Coolant };

struct IonState {
    size_t index = 0;
    Encoding encoding = Encoding::M;
    bool leaked = false;
    IonRole role = IonRole::Data;

    bool operator==(const IonState &) const = default;
};

struct Crystal {
    SpeciesRecord species;
    std::vector<IonState> ions;
    Mode mode;

    size_t size() const {
        return ions.size();
    }
    size_t data_ion_count() const;
    std::string encodings() const;
};

/// n data ions in the mode's storage encoding. Throws InvalidMode for an
/// unsupported triple unless custom modes are allowed, InvalidCircuit for n = 0.
Crystal new_crystal(const SpeciesRecord &species, size_t n, Mode mode, bool allow_custom_modes = false);

/// Appends a G-encoded coolant ion and returns its index.
size_t add_coolant_ion(Crystal &crystal);

Crystal set_encoding(Crystal crystal, size_t index, Encoding encoding);

enum class Pauli { I, X, Y, Z };

/// Pure state of the unleaked data qubits. A leaked qubit is projected out of
/// the vector, so its length is always 2^(unleaked count).
class QuantumState {
   public:
    explicit QuantumState(size_t num_qubits);

    size_t num_qubits() const {
        return leaked_.size();
    }
    size_t num_active() const;
    bool leaked(size_t q) const {
        return leaked_.at(q);
    }
    const std::vector<bool> &leak_mask() const {
        return leaked_;
    }
    const std::vector<std::complex<double>> &amplitudes() const {
        return amps_;
    }
    double norm_squared() const;

    /// exp(-i angle/2 sigma_axis) with axis one of X, Y, Z.
    void rotate(size_t q, Pauli axis, double angle);
    /// exp(-i angle/2 P(x)P) with P one of X, Z.
    void rotate_pair(size_t q1, size_t q2, Pauli pauli, double angle);
    void apply_pauli(size_t q, Pauli p);

    double probability_one(size_t q) const;
    /// Projects onto q = bit and renormalizes. Returns the branch probability.
    double project(size_t q, bool bit);
    /// Samples a Z measurement from a uniform draw in [0, 1).
    bool measure(size_t q, double uniform);
    /// Measures, then flips to |0>.
    void reset(size_t q, double uniform);
    /// Leaves q in |bit> regardless of prior state (sampled through a measurement draw).
    void reset_to(size_t q, bool bit, double uniform);
    /// Measures q, removes it from the vector and marks it leaked.
    void leak(size_t q, double uniform);

    /// Probability of each basis string over the active qubits; bit k of the
    /// index is the k-th active qubit.
    std::vector<double> probabilities() const;

   private:
    size_t slot(size_t q) const;

    std::vector<std::complex<double>> amps_;
    std::vector<bool> leaked_;
};

}  // namespace omg

#endif
