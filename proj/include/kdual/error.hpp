#pragma once

#include <stdexcept>
#include <string>

namespace kdual {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A structure failed one of its defining identities.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A truncated computation cannot certify the requested degrees.
class InexactWindow : public Error {
public:
    using Error::Error;
};

/// Malformed input document.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line = 0, std::size_t column = 0)
        : Error(line ? msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")" : msg),
          line_(line),
          column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A combinatorial cap (object count, enumeration size) was exceeded.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// Outcome of a structural check: pass, or the first violated identity.
struct Report {
    bool ok = true;
    std::string failure;

    static Report pass() { return {}; }
    static Report fail(std::string why) { return {false, std::move(why)}; }
    explicit operator bool() const { return ok; }
};

}  // namespace kdual
