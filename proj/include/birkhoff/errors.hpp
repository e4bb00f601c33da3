#pragma once

#include <stdexcept>
#include <string>

namespace birkhoff {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dyadic conversion requested for a rational whose denominator is not a power of two.
struct NonDyadicDenominator : Error {
    using Error::Error;
};

// Backward odometer orbit fell below the all-zeros point.
struct NegativeOrbitUnderflow : Error {
    using Error::Error;
};

struct TruncationTooDeep : Error {
    using Error::Error;
};

// Rate target requires tower heights beyond the configured exponent cap.
struct PhiTooSlow : Error {
    using Error::Error;
};

struct BoundViolated : Error {
    using Error::Error;
};

struct ConfigInvalid : Error {
    using Error::Error;
};

struct ToleranceNotMet : Error {
    using Error::Error;
};

struct PrecisionExhausted : Error {
    using Error::Error;
};

} // namespace birkhoff
