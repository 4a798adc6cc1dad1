#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pseudopoints {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed polynomial text. `offset` is the byte position of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// An enumeration would exceed the configured work limit.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Input outside the domain of an operation (bad range, degenerate polynomial, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

} // namespace pseudopoints
