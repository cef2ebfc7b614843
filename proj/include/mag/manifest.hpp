#pragma once

// Run manifests: every CLI output file is accompanied by
// <output>.manifest.json recording the command, its parameters, the seed and
// the tool version, so a run can be reproduced from its artifacts alone.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace mag {

struct RunManifest {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::string tool_version;
    std::string started_utc;
    std::string finished_utc;

    static RunManifest begin(std::string command, std::uint64_t seed);
    void finish();
    nlohmann::json to_json() const;
    /// Writes <output_path>.manifest.json next to the output file.
    void write_for(const std::string& output_path) const;
};

std::string utc_timestamp();

} // namespace mag
