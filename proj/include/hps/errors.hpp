#pragma once

#include <stdexcept>
#include <string>

namespace hps {

/// Base class for solver failures that are not plain argument errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A local or global linear system is singular or too ill-conditioned to trust,
/// or the problem itself has no unique solution (e.g. b == 0).
class DegenerateProblemError : public Error {
 public:
  using Error::Error;
};

/// Sample fluxes do not span the leaf boundary space at the requested tolerance.
class InsufficientSamplingError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit of a leaf operator missed its residual threshold.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Coupling block of a merge is numerically singular.
class MergeSingularityError : public Error {
 public:
  using Error::Error;
};

/// A structural invariant of the solver was violated (a bug, not bad input).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hps
