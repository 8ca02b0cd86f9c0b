#pragma once

#include <stdexcept>

namespace qep {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonHermitianInput : Error { using Error::Error; };
struct NegativeSpectrum : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NotCPTP : Error { using Error::Error; };
struct InvalidParameter : Error { using Error::Error; };
struct SingularPrior : Error { using Error::Error; };
struct SupportMismatch : Error { using Error::Error; };
struct NotFullRank : Error { using Error::Error; };
struct PreconditionViolation : Error { using Error::Error; };

}  // namespace qep
