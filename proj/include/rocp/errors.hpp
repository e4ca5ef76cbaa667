#pragma once

#include <stdexcept>
#include <string>

namespace rocp {

/// Thrown when an iterative solver produces non-finite values.
/// Carries the sweep index at which the failure was detected.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, int sweep)
        : std::runtime_error(what + " (sweep " + std::to_string(sweep) + ")"),
          sweep_(sweep) {}

    int sweep() const { return sweep_; }

private:
    int sweep_;
};

}  // namespace rocp
