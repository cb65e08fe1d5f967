#pragma once

#include <stdexcept>
#include <string>

namespace egf {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad user-supplied argument (grid sizes, ranks, parameter ranges).
class InvalidArgumentError : public Error {
public:
  using Error::Error;
};

// Matrix/vector dimensions do not line up.
class ShapeError : public Error {
public:
  using Error::Error;
};

// Covariance factorization failed even after jitter escalation.
class IllConditionedKernelError : public Error {
public:
  IllConditionedKernelError(const std::string& msg, double attempted_jitter)
      : Error(msg), attempted_jitter(attempted_jitter) {}
  double attempted_jitter;
};

// Operator is (numerically) singular at the requested parameter.
class ResonanceError : public Error {
public:
  ResonanceError(const std::string& msg, double theta, double nearest_eigenfrequency)
      : Error(msg), theta(theta), nearest_eigenfrequency(nearest_eigenfrequency) {}
  double theta;
  double nearest_eigenfrequency;
};

// Data has lower numerical rank than the requested decomposition.
class RankError : public Error {
public:
  using Error::Error;
};

// Least-squares fit has no information in any mode.
class DegenerateFitError : public Error {
public:
  using Error::Error;
};

// Dense materialization guard exceeded.
class TooLargeError : public Error {
public:
  using Error::Error;
};

// Kernel evaluated on its singular diagonal.
class PoleError : public Error {
public:
  using Error::Error;
};

// On-disk bundle is inconsistent with its manifest.
class BundleError : public Error {
public:
  using Error::Error;
};

// Bundle format version missing or unsupported.
class FormatError : public Error {
public:
  using Error::Error;
};

}  // namespace egf
