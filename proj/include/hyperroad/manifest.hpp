#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperroad/config.hpp"

namespace hyperroad {

inline constexpr const char* kToolVersion = "hyperroad 1.0.0";

// FNV-1a 64 content hash, hex string
std::string digest_file(const std::string& path);

struct RunManifest {
    std::string command;
    TrainConfig config;
    bool has_config = false;
    std::vector<std::pair<std::string, std::string>> input_digests;  // (path, digest)
    std::vector<std::pair<std::string, double>> timings_ms;          // (phase, wall ms)

    void add_input(const std::string& path);
    void add_timing(const std::string& phase, double ms);
    // write-to-temp-then-rename so readers never observe a partial manifest
    void write_atomic(const std::string& path) const;
};

// simple wall-clock scope timer feeding a manifest
class PhaseTimer {
public:
    PhaseTimer(RunManifest& manifest, std::string phase);
    ~PhaseTimer();
    PhaseTimer(const PhaseTimer&) = delete;
    PhaseTimer& operator=(const PhaseTimer&) = delete;

private:
    RunManifest& manifest_;
    std::string phase_;
    std::uint64_t start_ns_;
};

}  // namespace hyperroad
