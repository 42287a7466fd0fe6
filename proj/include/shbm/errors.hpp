#ifndef SHBM_ERRORS_HPP
#define SHBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace shbm {

// Input could not be parsed (JSON / DIMACS / LP arguments).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Instance failed validation; the full report is in the message.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive enumeration was requested beyond the configured cap.
struct BudgetExceededError : std::runtime_error {
    explicit BudgetExceededError(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency guarantee failed (indicates a bug, not bad input).
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace shbm

#endif
