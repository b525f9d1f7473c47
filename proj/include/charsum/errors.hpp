#pragma once

#include <stdexcept>
#include <string>

namespace charsum {

// Bad input to an operation. The CLI maps this to exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Search conditions that admit no solution at all (exit code 3).
class Infeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A feasible search that found nothing in the allowed range (exit code 3).
class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

}  // namespace charsum
