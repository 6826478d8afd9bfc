#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ept {

/// Base class for every data-level failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based.
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

class DuplicateNameError : public Error {
public:
    explicit DuplicateNameError(std::string name)
        : Error("duplicate definition name '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// A dependency cycle. `cycle` lists node names in order; the last depends on the first.
class CycleError : public Error {
public:
    CycleError(const std::string& what, std::vector<std::string> cycle)
        : Error(what), cycle_(std::move(cycle)) {}
    const std::vector<std::string>& cycle() const noexcept { return cycle_; }

private:
    std::vector<std::string> cycle_;
};

class AmbiguousTheoremError : public Error {
public:
    explicit AmbiguousTheoremError(std::vector<std::string> candidates);
    const std::vector<std::string>& candidates() const noexcept { return candidates_; }

private:
    std::vector<std::string> candidates_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class DegenerateSampleError : public Error {
public:
    using Error::Error;
};

class ConfigurationError : public Error {
public:
    using Error::Error;
};

}  // namespace ept
