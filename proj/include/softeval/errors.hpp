#pragma once

#include <stdexcept>
#include <string>

namespace softeval {

/// Base class for all errors raised by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input data (bad CSV cell, value outside [0, 1], duplicate id).
class parse_error : public error {
  public:
    using error::error;
};

/// Prediction and reference do not line up (length mismatch, item or class set mismatch).
class alignment_error : public error {
  public:
    using error::error;
};

/// Invalid parameters: thresholds out of range, non-positive shape parameters, bad grids.
class config_error : public error {
  public:
    using error::error;
};

/// A computation has no defined result for its input (no scorable classes, too few observations).
class domain_error : public error {
  public:
    using error::error;
};

/// File could not be opened, read or written.
class io_error : public error {
  public:
    using error::error;
};

}  // namespace softeval
