#pragma once

#include <stdexcept>
#include <string>

namespace subspace {

// Invalid or inconsistent experiment configuration (bad key, bad value,
// violated precondition on dimensions). Maps to CLI exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (IDX/CSV parse failures, dimension mismatches).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at run time (divergence, rank deficiency, non-PSD
// square roots). Maps to CLI exit code 2.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace subspace
