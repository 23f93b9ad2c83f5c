#pragma once

#include <stdexcept>
#include <string>

namespace qfact {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (non-member,
/// unit where a non-unit is required, degenerate form, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Eichler level 0 or 1: arithmetic is fine, factorization routines refuse.
class HereditaryLevelError : public DomainError {
public:
    explicit HereditaryLevelError(int level)
        : DomainError("hereditary: factorization routines require level >= 2, got " +
                      std::to_string(level)) {}
};

class DegenerateFormError : public DomainError {
public:
    DegenerateFormError() : DomainError("degenerate: half-discriminant is zero") {}
};

/// The residue form is not one of the normalized shapes handled by the
/// case table; callers have to normalize it first.
class NormalizationRequiredError : public DomainError {
public:
    NormalizationRequiredError() : DomainError("normalize first: residue form has no recognized normal shape") {}
};

class NotFoundError : public DomainError {
public:
    using DomainError::DomainError;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// An enumeration exceeded its configured result budget.
class OverflowError : public Error {
public:
    using Error::Error;
};

} // namespace qfact
