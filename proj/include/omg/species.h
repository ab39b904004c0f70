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

#ifndef OMG_SPECIES_H
#define OMG_SPECIES_H

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace omg {

/// Seconds per Julian year; year-valued lifetimes are converted with this.
inline constexpr double kJulianYearSeconds = 31557600.0;
inline constexpr double kSecondsPerDay = 86400.0;

/// Angular momentum that may be half-integer, stored as twice its value.
struct HalfInteger {
    int twice = 0;

    double value() const {
        return twice / 2.0;
    }
    std::string str() const;
    static HalfInteger parse(const std::string &text);

    bool operator==(const HalfInteger &) const = default;
};

/// Hyperfine level pair F <-> F'.
struct HyperfinePair {
    int f = 0;
    int f_prime = 0;

    std::string str() const;
    bool operator==(const HyperfinePair &) const = default;
};

enum class MetastableManifold { D5_2, F7_2 };

std::string manifold_label(MetastableManifold manifold);
MetastableManifold parse_manifold_label(const std::string &label);
/// Electronic angular momentum J of the manifold.
HalfInteger manifold_j(MetastableManifold manifold);

struct SpeciesRecord {
    std::string name;
    HalfInteger nuclear_spin;
    HyperfinePair g_qubit_levels;
    double g_splitting_hz = 0;
    MetastableManifold m_manifold = MetastableManifold::D5_2;
    double m_lifetime_s = 0;
    bool lifetime_is_lower_bound = false;
    std::vector<HyperfinePair> m_qubit_pairs;
    std::vector<double> m_splittings_hz;
    double o_wavelength_m = 0;

    bool operator==(const SpeciesRecord &) const = default;
};

/// Throws Error(InvalidRecord) naming the first violated invariant.
void check_record(const SpeciesRecord &record);

/// exp(-t / tau) for the record's metastable lifetime.
double m_survival_probability(const SpeciesRecord &record, double t_seconds);

double m_qubit_splitting(const SpeciesRecord &record, const HyperfinePair &pair);

/// The seven species of the reference table, in table order.
const std::vector<SpeciesRecord> &builtin_species();

/// JSON record in file units (MHz, seconds, nm).
nlohmann::ordered_json record_to_json(const SpeciesRecord &record);
SpeciesRecord record_from_json(const std::string &label, const nlohmann::ordered_json &j);

/// Species database: the builtin table plus optional user overrides.
/// Immutable once loaded.
class SpeciesDb {
   public:
    SpeciesDb();

    static SpeciesDb builtin() {
        return SpeciesDb();
    }

    /// Adds or replaces records from a species file object. Throws
    /// Error(ParseError / InvalidRecord) on malformed input.
    void apply_overrides(const nlohmann::ordered_json &file);
    void apply_override_file(const std::string &path);

    const SpeciesRecord &lookup(const std::string &name) const;
    bool contains(const std::string &name) const;
    const std::vector<SpeciesRecord> &records() const {
        return records_;
    }
    /// Labels added or replaced by override files, in application order.
    const std::vector<std::string> &overridden() const {
        return overridden_;
    }

    nlohmann::ordered_json to_json() const;
    static SpeciesDb from_json(const nlohmann::ordered_json &file);

    /// One row per species, columns in table order.
    std::string format_table() const;

   private:
    std::vector<SpeciesRecord> records_;
    std::vector<std::string> overridden_;
};

/// Row cells for the species table, exposed for tests.
std::vector<std::string> format_species_row(const SpeciesRecord &record);

}  // namespace omg

#endif
