#pragma once

#include <stdexcept>
#include <string>

namespace vmsched {

/// Invalid scenario or workload configuration (bad ranges, weights that do
/// not normalize, non-positive tick, ...). Raised during validation, before
/// any simulation stepping.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failure while emitting result tables or traces. The message
/// always carries the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace vmsched
