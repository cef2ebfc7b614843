#include "mag/manifest.hpp"

#include "mag/errors.hpp"
#include "mag/version.hpp"

#include <ctime>
#include <fstream>

namespace mag {

std::string utc_timestamp() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest RunManifest::begin(std::string command, std::uint64_t seed) {
    RunManifest m;
    m.command = std::move(command);
    m.seed = seed;
    m.tool_version = kToolVersion;
    m.started_utc = utc_timestamp();
    return m;
}

void RunManifest::finish() {
    finished_utc = utc_timestamp();
}

nlohmann::json RunManifest::to_json() const {
    return {{"command", command},   {"parameters", parameters},
            {"seed", seed},         {"tool_version", tool_version},
            {"started_utc", started_utc}, {"finished_utc", finished_utc}};
}

void RunManifest::write_for(const std::string& output_path) const {
    const std::string path = output_path + ".manifest.json";
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write manifest: " + path);
    f << to_json().dump(2) << "\n";
}

} // namespace mag
