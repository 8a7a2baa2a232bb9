#pragma once

#include <stdexcept>
#include <string>

namespace hyperroad {

// Error taxonomy mirrors the CLI exit codes: file/parse problems (2),
// configuration problems (3), numerical aborts (4).
struct FileError : std::runtime_error {
    explicit FileError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hyperroad
