#pragma once

#include <stdexcept>
#include <string>

namespace qsat {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input (DIMACS text, circuit JSON, partition files).
class ParseError : public Error {
public:
    ParseError(int line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
    explicit ParseError(const std::string& message) : Error(message), line_(0) {}

    int line() const { return line_; }

private:
    int line_;
};

/// A configured resource cap was exceeded (qubit budget, branch count).
class ResourceError : public Error {
public:
    using Error::Error;
};

} // namespace qsat
