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

#include "omg/species.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "omg/error.h"

using json = nlohmann::ordered_json;

namespace omg {

std::string HalfInteger::str() const {
    if (twice % 2 == 0) {
        return std::to_string(twice / 2);
    }
    return std::to_string(twice) + "/2";
}

HalfInteger HalfInteger::parse(const std::string &text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return HalfInteger{2 * std::stoi(text)};
        }
        if (text.substr(slash + 1) != "2") {
            throw Error(ErrorCode::ParseError, "half-integer must have denominator 2: '" + text + "'");
        }
        return HalfInteger{std::stoi(text.substr(0, slash))};
    } catch (const std::logic_error &) {
        throw Error(ErrorCode::ParseError, "not a half-integer: '" + text + "'");
    }
}

std::string HyperfinePair::str() const {
    return fmt::format("{}↔{}", f, f_prime);
}

std::string manifold_label(MetastableManifold manifold) {
    return manifold == MetastableManifold::D5_2 ? "D5/2" : "F7/2";
}

MetastableManifold parse_manifold_label(const std::string &label) {
    if (label == "D5/2") {
        return MetastableManifold::D5_2;
    }
    if (label == "F7/2") {
        return MetastableManifold::F7_2;
    }
    throw Error(ErrorCode::ParseError, "unknown metastable manifold '" + label + "' (expected D5/2 or F7/2)");
}

HalfInteger manifold_j(MetastableManifold manifold) {
    return manifold == MetastableManifold::D5_2 ? HalfInteger{5} : HalfInteger{7};
}

namespace {

void check_pair(const SpeciesRecord &r, const HyperfinePair &pair, HalfInteger j, const char *what) {
    auto fail = [&](const std::string &why) {
        throw Error(ErrorCode::InvalidRecord, r.name + ": " + what + " pair " + pair.str() + " " + why);
    };
    if (pair.f_prime != pair.f + 1) {
        fail("must satisfy F' = F + 1");
    }
    int lo2 = std::abs(r.nuclear_spin.twice - j.twice);
    int hi2 = r.nuclear_spin.twice + j.twice;
    if (2 * pair.f < lo2 || 2 * pair.f_prime > hi2) {
        fail(fmt::format("outside allowed F range [{}, {}]", HalfInteger{lo2}.str(), HalfInteger{hi2}.str()));
    }
}

SpeciesRecord make_builtin(
    std::string name,
    int twice_i,
    HyperfinePair g_pair,
    double g_ghz,
    MetastableManifold manifold,
    double lifetime_s,
    bool lower_bound,
    int first_m_f,
    std::vector<double> m_mhz,
    double wavelength_nm) {
    SpeciesRecord r;
    r.name = std::move(name);
    r.nuclear_spin = HalfInteger{twice_i};
    r.g_qubit_levels = g_pair;
    r.g_splitting_hz = g_ghz * 1e9;
    r.m_manifold = manifold;
    r.m_lifetime_s = lifetime_s;
    r.lifetime_is_lower_bound = lower_bound;
    for (size_t k = 0; k < m_mhz.size(); ++k) {
        int f = first_m_f + static_cast<int>(k);
        r.m_qubit_pairs.push_back({f, f + 1});
        r.m_splittings_hz.push_back(m_mhz[k] * 1e6);
    }
    r.o_wavelength_m = wavelength_nm / 1e9;
    return r;
}

std::vector<SpeciesRecord> load_builtin() {
    using enum MetastableManifold;
    std::vector<SpeciesRecord> v{
        make_builtin("43Ca+", 7, {3, 4}, 3.2, D5_2, 1.2, false, 1, {7, 10, 15, 20, 25}, 729),
        make_builtin("87Sr+", 9, {4, 5}, 5.0, D5_2, 0.39, false, 2, {8.2, 5.2, 2.7, 17, 38}, 674),
        make_builtin("133Ba+", 1, {0, 1}, 9.9, D5_2, 30, false, 2, {89}, 1760),
        make_builtin("135Ba+", 3, {1, 2}, 7.2, D5_2, 30, false, 1, {52, 50, 12}, 1760),
        make_builtin("137Ba+", 3, {1, 2}, 8.0, D5_2, 30, false, 1, {72, 63, 0.49}, 1760),
        make_builtin("171Yb+", 1, {0, 1}, 12.6, F7_2, 1.58 * kJulianYearSeconds, false, 3, {3620}, 467),
        // Lifetime quoted only as "days-years"; keep the conservative 1 day bound.
        make_builtin("173Yb+", 5, {2, 3}, 10.5, F7_2, kSecondsPerDay, true, 1, {260, 1000, 130, 920, 3300}, 467),
    };
    for (const auto &r : v) {
        check_record(r);
    }
    return v;
}

const json &require(const json &j, const std::string &label, const char *key) {
    if (!j.contains(key)) {
        throw Error(ErrorCode::ParseError, label + ": missing field '" + key + "'");
    }
    return j.at(key);
}

HyperfinePair pair_from_json(const json &j) {
    if (!j.is_array() || j.size() != 2) {
        throw Error(ErrorCode::ParseError, "hyperfine pair must be [F, F']");
    }
    return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

void check_record(const SpeciesRecord &r) {
    auto fail = [&](const std::string &why) {
        throw Error(ErrorCode::InvalidRecord, r.name + ": " + why);
    };
    if (r.name.empty()) {
        fail("empty species name");
    }
    if (r.nuclear_spin.twice < 0) {
        fail("negative nuclear spin");
    }
    if (!(r.m_lifetime_s > 0)) {
        fail("m_lifetime must be > 0");
    }
    if (!(r.g_splitting_hz > 0)) {
        fail("g_splitting must be > 0");
    }
    if (!(r.o_wavelength_m > 0)) {
        fail("o_wavelength must be > 0");
    }
    if (r.m_qubit_pairs.size() != r.m_splittings_hz.size()) {
        fail("m_splittings and m_qubit_pairs differ in length");
    }
    if (r.m_qubit_pairs.empty()) {
        fail("no m qubit pairs");
    }
    for (double s : r.m_splittings_hz) {
        if (!(s > 0)) {
            fail("m splittings must be > 0");
        }
    }
    check_pair(r, r.g_qubit_levels, HalfInteger{1}, "g");
    for (const auto &p : r.m_qubit_pairs) {
        check_pair(r, p, manifold_j(r.m_manifold), "m");
    }
}

double m_survival_probability(const SpeciesRecord &record, double t_seconds) {
    if (t_seconds < 0) {
        throw Error(ErrorCode::NegativeDuration, fmt::format("t = {} s", t_seconds));
    }
    return std::exp(-t_seconds / record.m_lifetime_s);
}

double m_qubit_splitting(const SpeciesRecord &record, const HyperfinePair &pair) {
    for (size_t k = 0; k < record.m_qubit_pairs.size(); ++k) {
        if (record.m_qubit_pairs[k] == pair) {
            return record.m_splittings_hz[k];
        }
    }
    throw Error(ErrorCode::UnknownPair, record.name + " has no m qubit pair " + pair.str());
}

const std::vector<SpeciesRecord> &builtin_species() {
    static const std::vector<SpeciesRecord> records = load_builtin();
    return records;
}

json record_to_json(const SpeciesRecord &r) {
    json pairs = json::array();
    json splittings = json::array();
    for (size_t k = 0; k < r.m_qubit_pairs.size(); ++k) {
        pairs.push_back({r.m_qubit_pairs[k].f, r.m_qubit_pairs[k].f_prime});
        splittings.push_back(r.m_splittings_hz[k] / 1e6);
    }
    return json{
        {"name", r.name},
        {"nuclear_spin", r.nuclear_spin.str()},
        {"g_qubit_levels", {r.g_qubit_levels.f, r.g_qubit_levels.f_prime}},
        {"g_splitting", r.g_splitting_hz / 1e6},
        {"m_manifold", manifold_label(r.m_manifold)},
        {"m_lifetime", r.m_lifetime_s},
        {"lifetime_is_lower_bound", r.lifetime_is_lower_bound},
        {"m_qubit_pairs", pairs},
        {"m_splittings", splittings},
        {"o_wavelength", r.o_wavelength_m * 1e9},
    };
}

SpeciesRecord record_from_json(const std::string &label, const json &j) {
    if (!j.is_object()) {
        throw Error(ErrorCode::ParseError, label + ": species entry must be an object");
    }
    SpeciesRecord r;
    try {
        r.name = j.value("name", label);
        if (r.name != label) {
            throw Error(ErrorCode::ParseError, "entry key '" + label + "' disagrees with name '" + r.name + "'");
        }
        const json &spin = require(j, label, "nuclear_spin");
        if (spin.is_string()) {
            r.nuclear_spin = HalfInteger::parse(spin.get<std::string>());
        } else {
            double twice = 2 * spin.get<double>();
            if (twice != std::round(twice)) {
                throw Error(ErrorCode::ParseError, label + ": nuclear_spin must be a half-integer");
            }
            r.nuclear_spin = HalfInteger{static_cast<int>(twice)};
        }
        r.g_qubit_levels = pair_from_json(require(j, label, "g_qubit_levels"));
        r.g_splitting_hz = require(j, label, "g_splitting").get<double>() * 1e6;
        r.m_manifold = parse_manifold_label(require(j, label, "m_manifold").get<std::string>());
        r.m_lifetime_s = require(j, label, "m_lifetime").get<double>();
        r.lifetime_is_lower_bound = j.value("lifetime_is_lower_bound", false);
        for (const auto &p : require(j, label, "m_qubit_pairs")) {
            r.m_qubit_pairs.push_back(pair_from_json(p));
        }
        for (const auto &s : require(j, label, "m_splittings")) {
            r.m_splittings_hz.push_back(s.get<double>() * 1e6);
        }
        r.o_wavelength_m = require(j, label, "o_wavelength").get<double>() / 1e9;
    } catch (const json::exception &e) {
        throw Error(ErrorCode::ParseError, label + ": " + e.what());
    }
    check_record(r);
    return r;
}

SpeciesDb::SpeciesDb() : records_(builtin_species()) {
}

void SpeciesDb::apply_overrides(const json &file) {
    if (!file.is_object()) {
        throw Error(ErrorCode::ParseError, "species file must be a JSON object keyed by species label");
    }
    for (const auto &[label, entry] : file.items()) {
        SpeciesRecord r = record_from_json(label, entry);
        bool replaced = false;
        for (auto &existing : records_) {
            if (existing.name == r.name) {
                existing = r;
                replaced = true;
            }
        }
        if (!replaced) {
            records_.push_back(r);
        }
        overridden_.push_back(r.name);
    }
}

void SpeciesDb::apply_override_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open species file '" + path + "'");
    }
    json file;
    try {
        file = json::parse(in);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    apply_overrides(file);
}

const SpeciesRecord &SpeciesDb::lookup(const std::string &name) const {
    for (const auto &r : records_) {
        if (r.name == name) {
            return r;
        }
    }
    throw Error(ErrorCode::UnknownSpecies, "'" + name + "'");
}

bool SpeciesDb::contains(const std::string &name) const {
    for (const auto &r : records_) {
        if (r.name == name) {
            return true;
        }
    }
    return false;
}

json SpeciesDb::to_json() const {
    json out = json::object();
    for (const auto &r : records_) {
        out[r.name] = record_to_json(r);
    }
    return out;
}

SpeciesDb SpeciesDb::from_json(const json &file) {
    SpeciesDb db;
    db.records_.clear();
    db.apply_overrides(file);
    db.overridden_.clear();
    return db;
}

namespace {

std::string format_number(double v) {
    return fmt::format("{}", v);
}

std::string format_pairs(const std::vector<HyperfinePair> &pairs) {
    bool consecutive = pairs.size() >= 3;
    for (size_t k = 1; k < pairs.size() && consecutive; ++k) {
        consecutive = pairs[k].f == pairs[k - 1].f + 1;
    }
    if (consecutive) {
        return pairs.front().str() + ",...," + pairs.back().str();
    }
    std::string out;
    for (size_t k = 0; k < pairs.size(); ++k) {
        out += (k ? ", " : "") + pairs[k].str();
    }
    return out;
}

std::string format_lifetime(const SpeciesRecord &r) {
    if (r.lifetime_is_lower_bound) {
        return "days-years";
    }
    if (r.m_lifetime_s >= kJulianYearSeconds) {
        return format_number(r.m_lifetime_s / kJulianYearSeconds) + " years";
    }
    return format_number(r.m_lifetime_s) + " s";
}

std::string format_wavelength(double meters) {
    double nm = meters * 1e9;
    if (nm >= 1000) {
        return format_number(nm / 1000) + " µm";
    }
    return format_number(nm) + " nm";
}

size_t display_width(const std::string &s) {
    size_t n = 0;
    for (unsigned char c : s) {
        n += (c & 0xC0) != 0x80;
    }
    return n;
}

}  // namespace

std::vector<std::string> format_species_row(const SpeciesRecord &r) {
    std::string splittings;
    for (size_t k = 0; k < r.m_splittings_hz.size(); ++k) {
        splittings += (k ? ", " : "") + format_number(r.m_splittings_hz[k] / 1e6);
    }
    return {
        r.name,
        r.nuclear_spin.str(),
        r.g_qubit_levels.str(),
        fmt::format("{:.1f} GHz", r.g_splitting_hz / 1e9),
        r.m_manifold == MetastableManifold::D5_2 ? std::string("D5/2") : std::string("F°7/2"),
        format_lifetime(r),
        format_pairs(r.m_qubit_pairs),
        splittings,
        format_wavelength(r.o_wavelength_m),
    };
}

std::string SpeciesDb::format_table() const {
    std::vector<std::vector<std::string>> rows{{
        "Species",
        "I",
        "g F↔F'",
        "g splitting",
        "m state",
        "m lifetime",
        "m F↔F'",
        "m splittings (MHz)",
        "o wavelength",
    }};
    for (const auto &r : records_) {
        rows.push_back(format_species_row(r));
    }
    std::vector<size_t> widths(rows[0].size(), 0);
    for (const auto &row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], display_width(row[c]));
        }
    }
    std::ostringstream out;
    for (const auto &row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) {
                out << std::string(widths[c] - display_width(row[c]) + 2, ' ');
            }
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace omg
