#pragma once

#include <stdexcept>
#include <string>

namespace radiso {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The normalizing integral of a density did not converge.
class DivergentMassError : public Error {
 public:
  using Error::Error;
};

// The support of a density is not an interval, so no transport exists.
class DisconnectedSupportError : public Error {
 public:
  explicit DisconnectedSupportError(const std::string& what, double gap_radius)
      : Error(what), gap_radius_(gap_radius) {}
  double gap_radius() const noexcept { return gap_radius_; }

 private:
  double gap_radius_;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// Finite differences of ln f are too noisy for curvature estimates.
class NonSmoothDensityError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class DegenerateDrawError : public Error {
 public:
  using Error::Error;
};

class OverlappingIntervalsError : public Error {
 public:
  using Error::Error;
};

class SupportError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A bound audit found a set violating the isoperimetric lower bound.
class AuditViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace radiso
