#pragma once

#include <stdexcept>
#include <string>

namespace smallgen {

// Raised when a certified comparison cannot be decided within the
// precision budget.  Callers must treat this as "don't know", never as a
// verdict.
struct undecided_error : std::runtime_error {
    explicit undecided_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an adaptive-precision computation exceeds its hard cap
// (2^16 bits unless stated otherwise).
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

// Internal cross-checks that should be unreachable for valid inputs.
struct consistency_error : std::logic_error {
    explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace smallgen
