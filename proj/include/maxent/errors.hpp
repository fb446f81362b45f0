#pragma once

#include <stdexcept>
#include <string>

namespace maxent {

// Exception hierarchy. The CLI maps DomainError (and subclasses) to exit
// code 3, IoError to 4, and anything else to a generic failure.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A probability vector failed validation (negative entry, bad normalization).
class ValidationError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Input does not satisfy an operation's structural precondition.
class PreconditionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// (n, r) has no closed form.
class NotSpecialCaseError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Request would exceed a configured enumeration budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace maxent
