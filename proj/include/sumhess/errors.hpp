#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sumhess {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller passed something outside an operation's contract.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A fractional power or root was requested outside the cone where it is real.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative kernel (eigen solver) failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Rejection sampler could not find cone points at a usable rate.
class SamplingExhausted : public Error {
public:
    using Error::Error;
};

/// A grid point left the admissible cone.
class ConeError : public Error {
public:
    ConeError(const std::string& what, std::size_t point)
        : Error(what), point_(point) {}
    std::size_t point() const noexcept { return point_; }

private:
    std::size_t point_;
};

/// The PDE instance itself is ill-posed at some point (f <= 0, non-finite f).
class InstanceError : public Error {
public:
    using Error::Error;
};

class LinearSolverError : public Error {
public:
    using Error::Error;
};

/// Expression text could not be parsed.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Expression evaluation hit a domain error (log of a negative, x/0, ...).
class EvalError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace sumhess
