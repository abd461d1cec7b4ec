#pragma once

#include <stdexcept>

namespace gmbl {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rejected input: shape mismatch, out-of-range parameter, malformed file.
struct ValidationError : Error {
  using Error::Error;
};

/// Numerical breakdown that survived input validation, e.g. a singular solve.
struct NumericalError : Error {
  using Error::Error;
};

struct MismatchedSampleCount : ValidationError { using ValidationError::ValidationError; };
struct NonFiniteEntry : ValidationError { using ValidationError::ValidationError; };
struct MissingView : ValidationError { using ValidationError::ValidationError; };
struct AnchorCountExceedsSamples : ValidationError { using ValidationError::ValidationError; };
struct NonPositiveKernelWidth : ValidationError { using ValidationError::ValidationError; };
struct NeighborCountTooLarge : ValidationError { using ValidationError::ValidationError; };
struct WeightsNotSimplex : ValidationError { using ValidationError::ValidationError; };
struct TooManyClusters : ValidationError { using ValidationError::ValidationError; };
struct LengthMismatch : ValidationError { using ValidationError::ValidationError; };
struct ViewOutOfRange : ValidationError { using ValidationError::ValidationError; };

struct SingularLocalGram : NumericalError { using NumericalError::NumericalError; };
struct SingularNormalMatrix : NumericalError { using NumericalError::NumericalError; };

}  // namespace gmbl
