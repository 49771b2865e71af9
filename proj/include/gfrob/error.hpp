#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gfrob {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A Gram or metric matrix failed the Hermitian test.
class NotHermitianError : public Error {
public:
    using Error::Error;
};

/// Cholesky met a non-positive pivot.
class NotPositiveDefiniteError : public Error {
public:
    NotPositiveDefiniteError(std::size_t pivot, double value)
        : Error("matrix is not positive definite: pivot " + std::to_string(pivot) +
                " has value " + std::to_string(value)),
          pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// Real and complex operands were mixed where only one field is allowed.
class FieldError : public Error {
public:
    using Error::Error;
};

/// Two spaces that must coincide do not.
class SpaceMismatchError : public Error {
public:
    using Error::Error;
};

/// An internal identity that must hold numerically did not.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (e.g. a class label out of range).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// A file could not be opened for reading or writing.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace gfrob
