#pragma once

#include <stdexcept>
#include <string>

namespace entente {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Syntax error in one of the line-based input formats. Reports 1-based
/// line and column of the offending token.
struct ParseError : Error {
    ParseError(std::string msg, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                ": " + std::move(msg)),
          line(line),
          column(column) {}

    int line = 0;
    int column = 0;
};

/// Bad or missing configuration (scenario files, paths, options).
struct ConfigError : Error {
    using Error::Error;
};

/// A protocol or operation was invoked on inputs that violate its contract.
struct PreconditionError : Error {
    using Error::Error;
};

} // namespace entente
