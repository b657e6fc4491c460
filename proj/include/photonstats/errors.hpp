// errors.hpp: Exception hierarchy shared by all photonstats modules

#pragma once

#include <stdexcept>
#include <string>

namespace photonstats {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operator or state shapes do not match the Hilbert space they are used in.
struct DimensionError : Error {
    using Error::Error;
};

// Physical parameters or configuration values outside their allowed range.
struct ValidationError : Error {
    using Error::Error;
};

// A closed-form expression hit a vanishing denominator.
struct SingularPointError : Error {
    using Error::Error;
};

// The Liouvillian has more than one stationary state.
struct NonUniqueSteadyStateError : Error {
    using Error::Error;
};

// Linear solve or time integration did not reach the requested accuracy.
struct ConvergenceError : Error {
    using Error::Error;
};

// Normalised correlation requested for a state with (numerically) no photons.
struct UndefinedCorrelationError : Error {
    using Error::Error;
};

// Reading a config or writing results failed.
struct IoError : Error {
    using Error::Error;
};

} // namespace photonstats
