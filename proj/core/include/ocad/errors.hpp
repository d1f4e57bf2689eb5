#pragma once

#include <stdexcept>
#include <string>

namespace ocad {

// A numerical routine (root finder, eigen-solver, nonlinear solve) failed to
// reach its tolerance. Bad arguments raise std::invalid_argument instead.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ocad
