#ifndef HOLO_ERRORS_HPP
#define HOLO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace holo {

// Thrown when the linear system has no (approximate) nullspace at the
// requested parameters.
struct NoSolutionError : std::runtime_error {
    explicit NoSolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when the nullspace has dimension >= 2 and the weight direction is
// not uniquely determined.
struct DegenerateSolutionError : std::runtime_error {
    explicit DegenerateSolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown by enumeration routines when the configured step budget is exceeded.
struct BudgetExceededError : std::runtime_error {
    explicit BudgetExceededError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown by checked integer accumulation on 64-bit overflow.
struct CountOverflowError : std::overflow_error {
    explicit CountOverflowError(const std::string& msg) : std::overflow_error(msg) {}
};

} // namespace holo

#endif
