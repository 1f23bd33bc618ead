#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vcell {

// Base for every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input that violates a documented precondition or schema.
class DataError : public Error {
public:
    using Error::Error;
};

// Malformed scan-log input. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Binary index decoding failures.
class FormatError : public DataError {
public:
    enum class Kind { bad_magic, unsupported_version, truncated, trailing_bytes, checksum_mismatch, invalid_params };

    FormatError(Kind kind, const std::string& what) : DataError(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace vcell
