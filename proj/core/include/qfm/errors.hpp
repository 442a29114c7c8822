#pragma once

#include <stdexcept>
#include <string>

namespace qfm {

/// Invalid run configuration (unknown key, out-of-range value, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qfm
