#pragma once

#include <stdexcept>
#include <string>

namespace vqst {

/// Invalid configuration supplied by the caller (bad sizes, hyperparameters,
/// unknown names). Recoverable by fixing the config.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// API misuse: mismatched dimensions, out-of-range targets, calling an
/// operation on data it cannot apply to.
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A file or document failed schema validation. Carries a message listing
/// every offending field.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem-level failure (unreadable input, unwritable output path).
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vqst
