#pragma once

#include <stdexcept>
#include <string>

namespace dtt {

// Invalid parameters, malformed config files, unsupported mode combinations.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// No threshold in the search bracket met the false-accusation target.
class CalibrationFailure : public std::runtime_error {
public:
    explicit CalibrationFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dtt
