#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

/// Raised when an input violates a documented precondition (bad dimensions,
/// non-normalized weights, a map that is not CPTP, malformed files).
/// The CLI maps this to exit code 2.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

class DimensionMismatch : public InvalidInput {
public:
    explicit DimensionMismatch(const std::string& what) : InvalidInput(what) {}
};

} // namespace qcorr
