#pragma once

#include <stdexcept>
#include <string>

namespace currentlab {

/// Raised for invalid inputs or failed computations.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the file readers; carries the 1-based line of the offending item.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace currentlab
