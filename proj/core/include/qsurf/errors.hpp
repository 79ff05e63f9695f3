#pragma once

#include <stdexcept>
#include <string>

namespace qsurf {

// Malformed input files, unknown keys, missing columns.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A domain invariant was violated; the message names the offending field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: non-convergence, singular systems, unreachable targets.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsurf
