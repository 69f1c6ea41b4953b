#pragma once

#include <stdexcept>
#include <string>

namespace moonvol {

/// Base of all user/data errors. The CLI maps these to exit status 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input with an optional 1-based line number (0 = not line-bound).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " at line " + std::to_string(line) : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Structurally valid input that violates a domain rule.
class DataError : public Error {
public:
    using Error::Error;
};

/// Zero-range bar: the composite variance is not positive, so ln() is undefined.
class DegenerateBarError : public DataError {
public:
    using DataError::DataError;
};

/// Too few observations for the requested model.
class InsufficientDataError : public DataError {
public:
    using DataError::DataError;
};

/// Design matrix is rank deficient.
class CollinearityError : public DataError {
public:
    using DataError::DataError;
};

/// Scenario parameters that cannot be realized.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Broken internal invariant. The CLI maps these to exit status 2.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace moonvol
