#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ordalg {

/// Raised when an operation is called outside its domain (bad events, mismatched arenas, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when no decision route exists for the semiring at hand.
class UnsupportedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Syntax error in a term, play or scalar literal, with a 1-based position.
class ParseError : public UsageError {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : UsageError(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace ordalg
