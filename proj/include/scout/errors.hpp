#pragma once

#include <stdexcept>
#include <string>

namespace scout {

/// Base class for all domain errors raised by the toolkit.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Camera view whose center lies outside the grid, or whose zoom is out of range.
struct InvalidViewError : Error {
    using Error::Error;
};

/// Pose enumeration produced no hypotheses and Absent was not allowed.
struct NoHypothesisError : Error {
    using Error::Error;
};

/// A Bayes update received an observation with zero total likelihood under the
/// current belief. Signals a mismatch between the model and the ground truth.
struct ImpossibleObservationError : Error {
    using Error::Error;
};

/// The exact oracle refused an instance above its node budget.
struct BudgetExceededError : Error {
    using Error::Error;
};

/// Malformed document (model file, config file, .pomdp text).
struct FormatError : Error {
    using Error::Error;
};

/// Config field error; message carries the field path.
struct ConfigError : FormatError {
    using FormatError::FormatError;
};

}  // namespace scout
