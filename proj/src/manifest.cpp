#include "hyperroad/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "hyperroad/checkpoint.hpp"
#include "hyperroad/errors.hpp"

#include "json.hpp"

namespace hyperroad {

std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open '" + path + "' for hashing");
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    char hex[24];
    std::snprintf(hex, sizeof(hex), "fnv64:%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

void RunManifest::add_input(const std::string& path) {
    input_digests.emplace_back(path, digest_file(path));
}

void RunManifest::add_timing(const std::string& phase, double ms) {
    timings_ms.emplace_back(phase, ms);
}

void RunManifest::write_atomic(const std::string& path) const {
    nlohmann::json j;
    j["version"] = kToolVersion;
    j["command"] = command;
    if (has_config) {
        nlohmann::json cfg = nlohmann::json::object();
        for (const auto& [k, v] : config_to_kv(config)) cfg[k] = v;
        j["config"] = cfg;
    }
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [p, d] : input_digests) inputs[p] = d;
    j["inputs"] = inputs;
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& [phase, ms] : timings_ms) timings[phase] = ms;
    j["timings_ms"] = timings;

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FileError("cannot write '" + tmp + "'");
        out << j.dump(2) << '\n';
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw FileError("cannot move manifest into place at '" + path + "'");
    }
}

PhaseTimer::PhaseTimer(RunManifest& manifest, std::string phase)
    : manifest_(manifest), phase_(std::move(phase)) {
    start_ns_ = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now().time_since_epoch())
            .count());
}

PhaseTimer::~PhaseTimer() {
    const std::uint64_t end_ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now().time_since_epoch())
            .count());
    manifest_.add_timing(phase_, static_cast<double>(end_ns - start_ns_) / 1e6);
}

}  // namespace hyperroad
