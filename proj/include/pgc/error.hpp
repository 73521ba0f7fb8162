// Error types shared across the library. The CLI maps these to exit codes.
#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace pgc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input (bad arguments, bad file contents).
struct UsageError : Error {
    using Error::Error;
};

// An enumeration or search would exceed its configured budget.
struct BudgetExceeded : Error {
    using Error::Error;
};

// pgcol parse failure; carries the 1-based line number and a short code.
struct FormatError : Error {
    FormatError(std::string code, int line, const std::string& what)
        : Error(what), code(std::move(code)), line(line) {}
    std::string code;
    int line;
};

// lift_join called on flats that are not skew.
struct NotSkew : Error {
    using Error::Error;
};

// decompose called on a colouring with a rainbow triangle; carries the witness.
struct RainbowTriangleError : Error {
    RainbowTriangleError(std::array<int, 3> t, const std::string& what)
        : Error(what), witness(t) {}
    std::array<int, 3> witness;
};

// An internal consistency check failed where a structure theorem guarantees
// success. Always indicates an implementation bug; never handled silently.
struct TheoremViolation : Error {
    using Error::Error;
};

}  // namespace pgc
