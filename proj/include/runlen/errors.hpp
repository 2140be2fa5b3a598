#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace runlen {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed spec document. Carries the byte offset where parsing stopped.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t byte_offset)
        : Error(message), byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_ = 0;
};

/// Arithmetic attempted between rational-mode and float-mode values, or an
/// operation that cannot be represented in the requested mode.
class ModeError : public Error {
public:
    using Error::Error;
};

/// Operation requires a total order but the tree has genuine parallel branching.
class NotTotalOrderError : public Error {
public:
    using Error::Error;
};

/// Operation requires a probability measure (total mass 1).
class NotProbabilityError : public Error {
public:
    using Error::Error;
};

/// Non-strict run statistics on a degenerate measure: run lengths are infinite.
class DegenerateMeasureError : public Error {
public:
    using Error::Error;
};

/// Non-strict run function evaluated at (or numerically too close to) a pole.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Oracle operation on a measure with diffuse mass.
class DiffuseUnsupportedError : public Error {
public:
    using Error::Error;
};

/// Enumeration would exceed the tuple budget.
class BudgetExceededError : public Error {
public:
    using Error::Error;
};

/// Precondition violation not covered by a more specific type.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

} // namespace runlen
