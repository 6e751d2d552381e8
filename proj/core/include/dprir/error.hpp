#pragma once

#include <stdexcept>
#include <string>

namespace dprir {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or mismatched file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The system matrix has no usable rays/pixels for a normalizer.
class DegenerateGeometry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filtered back-projection requires a full 360 degree scan.
class UnsupportedScanRange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A non-finite value appeared in an iterate.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, int timestep)
      : std::runtime_error(what), timestep_(timestep) {}

  int timestep() const noexcept { return timestep_; }

 private:
  int timestep_;
};

}  // namespace dprir
