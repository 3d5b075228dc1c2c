#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace slicebound {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatches, bad JSON fields, non-orthonormal rows.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a function (also unsupported orders/ranges).
class DomainError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A formula was requested outside the hypothesis under which it is asserted.
class GateError : public Error {
public:
    GateError(const std::string& what, std::vector<std::size_t> offending = {})
        : Error(what), offending_(std::move(offending)) {}
    const std::vector<std::size_t>& offending() const { return offending_; }

private:
    std::vector<std::size_t> offending_;
};

}  // namespace slicebound
