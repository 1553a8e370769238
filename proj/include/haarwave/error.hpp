#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace haarwave {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Arithmetic left its domain (division by zero, log of a non-positive number, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A problem definition is malformed or inconsistent.
class ProblemError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, std::size_t pivot)
        : Error(what), pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t iterations)
        : Error(what), iterations_(iterations) {}

    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

/// Time stepping failed; `step` is the index of the time level being computed.
class SolverError : public Error {
public:
    SolverError(const std::string& what, long step) : Error(what), step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_;
};

} // namespace haarwave
