#pragma once

#include <stdexcept>
#include <string>

namespace breakgauge {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed files, invalid configuration, violated preconditions.
/// Maps to process exit code 1.
struct ValidationError : Error {
    using Error::Error;
};

/// Degenerate or unstable numerics: rank deficiency, zero variance,
/// infeasible segmentations. Maps to process exit code 2.
struct NumericalError : Error {
    using Error::Error;
};

} // namespace breakgauge
