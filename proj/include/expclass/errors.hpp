#pragma once

#include <stdexcept>
#include <string>

namespace expclass {

// Bad parameters or configuration (maps to CLI exit code 4).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed input data (maps to CLI exit code 2).
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, long line = -1)
        : std::runtime_error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_number(line) {}
    long line_number;
};

// Valid input that leaves nothing to compute (maps to CLI exit code 3).
struct EmptyDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A quadrature produced a value outside its feasible range.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace expclass
