#ifndef ECSQB_ERRORS_HPP
#define ECSQB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ecsqb {

/// Base of every error raised by the library. The CLI maps all of these to
/// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integer arithmetic left the representable range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Input lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input at which the quantity carries no information (alpha = 0, b = 0).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Structured matrix with 1 + omega*d = 0 or gamma = 0.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Closed-form bound requested outside the region where it is the optimum.
class RegionError : public Error {
 public:
  using Error::Error;
};

/// Fock-space cutoff too small for the requested tail tolerance.
class CutoffError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace ecsqb

#endif  // ECSQB_ERRORS_HPP
