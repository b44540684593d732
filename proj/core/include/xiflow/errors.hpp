#pragma once

#include <stdexcept>
#include <string>

namespace xiflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two values from different number fields were combined.
class FieldMismatchError : public Error {
public:
    explicit FieldMismatchError(const std::string& what) : Error(what) {}
};

/// A candidate map failed the field-automorphism laws.
class InvalidAutomorphismError : public Error {
public:
    explicit InvalidAutomorphismError(const std::string& what) : Error(what) {}
};

/// The conjugate dynamics cannot be realized for this flow.
class NotConjugableError : public Error {
public:
    explicit NotConjugableError(const std::string& what) : Error(what) {}
};

/// A precondition on the inputs was violated (empty sample, bad step, ...).
class InvalidInputError : public Error {
public:
    explicit InvalidInputError(const std::string& what) : Error(what) {}
};

/// A numerical evaluation produced a non-finite or otherwise unusable value.
class EvaluationError : public Error {
public:
    explicit EvaluationError(const std::string& what) : Error(what) {}
};

} // namespace xiflow
