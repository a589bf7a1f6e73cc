#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcdc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (model JSON or OCL source), with 1-based position.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Input is well-formed but violates a model invariant or names an unknown entity.
class SemanticError : public Error {
public:
    using Error::Error;
};

/// OCL that parses but lies outside the supported subset (strings, let, iterate, ...).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A constraint cannot be reformulated into MC/DC variants.
class ReformulationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mcdc
