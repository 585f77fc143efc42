#pragma once

#include <stdexcept>
#include <string>

namespace wallbench {

/// Base class for all wallbench errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Violated mathematical precondition (non-finite input, argument outside the
/// physical domain).
class DomainError : public Error {
    using Error::Error;
};

/// Structural problem in data: bad shapes, inconsistent ids, schema
/// violations.
class ValidationError : public Error {
    using Error::Error;
};

/// Malformed or incomplete run configuration.
class ConfigError : public Error {
    using Error::Error;
};

/// Filesystem or stream failure.
class IoError : public Error {
    using Error::Error;
};

/// Submission violates the challenge file contract.
class SubmissionError : public ValidationError {
    using ValidationError::ValidationError;
};

/// Training diverged or produced non-finite values.
class TrainingError : public Error {
    using Error::Error;
};

} // namespace wallbench
