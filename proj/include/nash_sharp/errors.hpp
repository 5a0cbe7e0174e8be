#pragma once

#include <stdexcept>
#include <string>

namespace nash_sharp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shooting produced NaN/Inf; use a finer grid.
struct IntegratorInstability : Error {
    using Error::Error;
};

struct BracketTooSmall : Error {
    using Error::Error;
};

struct DegenerateInput : Error {
    using Error::Error;
};

struct StepSizeFailure : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw InvalidArgument(what);
}

}  // namespace nash_sharp
