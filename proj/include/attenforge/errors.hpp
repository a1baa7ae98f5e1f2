#pragma once

#include <stdexcept>
#include <string>

namespace attenforge {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input files, unknown/missing keys, invariant violations at parse time.
// The CLI maps these to exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

// Numerical failures: singular systems, degenerate networks, bracket/range
// failures in root finding and calibration. The CLI maps these to exit code 3.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace attenforge
