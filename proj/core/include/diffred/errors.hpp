#ifndef DIFFRED_ERRORS_HPP
#define DIFFRED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace diffred {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input data; carries the 1-based location when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, long row, long col)
        : std::runtime_error(msg + " at row " + std::to_string(row) +
                             ", column " + std::to_string(col)),
          row_(row), col_(col) {}
    explicit ParseError(const std::string& msg) : std::runtime_error(msg), row_(-1), col_(-1) {}

    long row() const { return row_; }
    long col() const { return col_; }

private:
    long row_;
    long col_;
};

/// Invalid configuration or out-of-range parameter.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerically degenerate input (zero matrix, zero row, undefined metric).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace diffred

#endif
