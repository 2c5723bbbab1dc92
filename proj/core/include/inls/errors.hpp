#pragma once

#include <stdexcept>
#include <string>

namespace inls {

/// Invalid input: bad arguments, malformed files, unknown catalog names.
/// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The integrator or a monitor stopped a run (non-finite values, blow-up
/// guard, domain escape). The CLI maps this to exit code 3.
class NumericalAbort : public std::runtime_error {
public:
    NumericalAbort(const std::string& what, long step)
        : std::runtime_error(what), step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_;
};

}  // namespace inls
