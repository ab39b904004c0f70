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

#ifndef OMG_REPORT_H
#define OMG_REPORT_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "omg/simulator.h"

namespace omg {

inline constexpr const char *kToolVersion = "0.1.0";

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string &bytes);
/// Hex SHA-256 of a file's contents. Throws ParseError if unreadable.
std::string sha256_file(const std::string &path);

struct InputFile {
    std::string role;
    std::string path;
    std::string sha256;
};

struct RunManifest {
    std::vector<InputFile> inputs;
    std::string mode;
    std::string species;
    uint64_t seed = 0;
    uint64_t shots = 0;
    std::string tool_version = kToolVersion;
    std::vector<std::string> species_overrides;
    std::optional<std::string> timestamp;

    void add_input(const std::string &role, const std::string &path);
    nlohmann::json to_json() const;
};

nlohmann::json sim_result_to_json(const SimResult &result);
/// `source_kind,accumulated_probability`, rows in budget-key order.
std::string budget_csv(const SimResult &result);

nlohmann::json simulation_report(
    const RunManifest &manifest, const SimResult &result, const std::optional<OutcomeDistribution> &exact);

nlohmann::json comparison_to_json(const ModeComparisonReport &report);
std::string comparison_table(const ModeComparisonReport &report);
nlohmann::json comparison_report(const RunManifest &manifest, const ModeComparisonReport &report);

/// UTC, ISO 8601, second resolution.
std::string utc_timestamp();

}  // namespace omg

#endif
