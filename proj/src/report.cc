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

#include "omg/report.h"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "omg/error.h"

namespace omg {

std::string sha256_hex(const std::string &bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::InvalidConfig, "sha256 failed");
    }
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += fmt::format("{:02x}", digest[i]);
    }
    return out;
}

std::string sha256_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

void RunManifest::add_input(const std::string &role, const std::string &path) {
    inputs.push_back({role, path, sha256_file(path)});
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["inputs"] = nlohmann::json::array();
    for (const auto &f : inputs) {
        j["inputs"].push_back({{"role", f.role}, {"path", f.path}, {"sha256", f.sha256}});
    }
    j["mode"] = mode;
    j["species"] = species;
    j["seed"] = seed;
    j["shots"] = shots;
    j["tool_version"] = tool_version;
    j["species_overrides"] = species_overrides;
    if (timestamp) {
        j["timestamp"] = *timestamp;
    }
    return j;
}

nlohmann::json sim_result_to_json(const SimResult &r) {
    nlohmann::json j;
    j["shots"] = r.shots;
    j["outcome_histogram"] = r.outcome_histogram;
    j["fidelity"] = r.fidelity;
    j["fidelity_stderr"] = r.fidelity_stderr;
    j["fidelity_definition"] = r.fidelity_definition;
    j["herald_attempt_stats"] = {
        {"blocks", r.herald_attempt_stats.blocks},
        {"mean_attempts", r.herald_attempt_stats.mean_attempts},
        {"max_attempts", r.herald_attempt_stats.max_attempts},
        {"exhausted", r.herald_attempt_stats.exhausted},
    };
    j["budget"] = r.budget;
    j["leak_fraction"] = r.leak_fraction;
    j["failure_fraction"] = r.failure_fraction;
    j["prep_retries"] = r.prep_retries;
    return j;
}

std::string budget_csv(const SimResult &result) {
    std::string out = "source_kind,accumulated_probability\n";
    for (size_t k = 0; k < static_cast<size_t>(BudgetKey::Count); ++k) {
        const std::string name = budget_key_name(static_cast<BudgetKey>(k));
        auto it = result.budget.find(name);
        out += fmt::format("{},{}\n", name, it == result.budget.end() ? 0.0 : it->second);
    }
    return out;
}

nlohmann::json simulation_report(
    const RunManifest &manifest, const SimResult &result, const std::optional<OutcomeDistribution> &exact) {
    nlohmann::json j;
    j["manifest"] = manifest.to_json();
    j["result"] = sim_result_to_json(result);
    if (exact) {
        j["exact_distribution"] = *exact;
    }
    return j;
}

nlohmann::json comparison_to_json(const ModeComparisonReport &report) {
    nlohmann::json j;
    j["species"] = report.species;
    j["shots"] = report.shots;
    j["seed"] = report.seed;
    j["fidelity_definition"] = report.fidelity_definition;
    j["rows"] = nlohmann::json::array();
    for (const auto &r : report.rows) {
        j["rows"].push_back({
            {"mode", r.mode.name()},
            {"fidelity", r.fidelity},
            {"fidelity_stderr", r.fidelity_stderr},
            {"duration_s", r.duration_s},
            {"cast_applications", r.cast_applications},
            {"coherent_casts", r.coherent_casts},
            {"exposures", r.exposures},
            {"leak_fraction", r.leak_fraction},
            {"budget", r.budget},
        });
    }
    return j;
}

std::string comparison_table(const ModeComparisonReport &report) {
    std::string out = fmt::format(
        "{:<6} {:>10} {:>10} {:>12} {:>6} {:>9} {:>10}\n",
        "mode",
        "fidelity",
        "stderr",
        "duration_s",
        "casts",
        "exposed",
        "leak");
    for (const auto &r : report.rows) {
        out += fmt::format(
            "{:<6} {:>10.6f} {:>10.6f} {:>12.6g} {:>6} {:>9} {:>10.6f}\n",
            r.mode.name(),
            r.fidelity,
            r.fidelity_stderr,
            r.duration_s,
            r.cast_applications,
            r.exposures,
            r.leak_fraction);
    }
    return out;
}

nlohmann::json comparison_report(const RunManifest &manifest, const ModeComparisonReport &report) {
    nlohmann::json j;
    j["manifest"] = manifest.to_json();
    j["comparison"] = comparison_to_json(report);
    return j;
}

std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace omg
