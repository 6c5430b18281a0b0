#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace acal {

// Invalid arguments are reported with std::invalid_argument. The types below
// cover failures that callers (and the CLI exit-code mapping) need to tell
// apart.

/// Malformed or inconsistent external data (capture files, exports).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Capture-file parse failure at a known byte offset.
class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::uint64_t offset)
        : DataError(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

    /// Same offset, message replaced verbatim.
    ParseError relabeled(const std::string& message) const { return ParseError(message, offset_, 0); }

private:
    ParseError(const std::string& message, std::uint64_t offset, int) : DataError(message), offset_(offset) {}

    std::uint64_t offset_;
};

/// Numerical breakdown: singular systems, division guards.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IllConditionedError : public NumericalError {
public:
    IllConditionedError(const std::string& what, double condition)
        : NumericalError(what + " (condition estimate " + std::to_string(condition) + ")"),
          condition_(condition) {}

    double condition() const noexcept { return condition_; }

    IllConditionedError relabeled(const std::string& message) const {
        return IllConditionedError(message, condition_, 0);
    }

private:
    IllConditionedError(const std::string& message, double condition, int)
        : NumericalError(message), condition_(condition) {}

    double condition_;
};

/// No matched-filter peak could be found (e.g. all-zero observation).
class EstimationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Null-forming evaluation cannot be computed (zero desired-direction power).
class EvaluationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Scenario configuration rejected at load time.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rethrows the exception currently being handled with `prefix` prepended to
/// its message. The error category (and thus the CLI exit code) is kept.
/// Must be called from inside a catch block.
[[noreturn]] void rethrow_with_context(const std::string& prefix);

} // namespace acal
