// Copyright (c) the strongmin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STRONGMIN_ERRORS_HPP
#define STRONGMIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace strongmin {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent caller input (bad shapes, non-finite entries,
// out-of-range arguments).
struct InputError : Error {
  using Error::Error;
};

// Dimension bookkeeping violated between blocks that must be conformable.
struct ShapeError : Error {
  using Error::Error;
};

// Evaluation requested outside the domain of definition (e.g. a Laurent
// tail at z = 0).
struct DomainError : Error {
  using Error::Error;
};

// A claimed matrix symmetry does not hold within tolerance.  `defect` is the
// norm of the residual against the claimed symmetry class.
struct StructureError : Error {
  double defect;
  StructureError(const std::string& msg, double defect_)
      : Error(msg), defect(defect_) {}
};

// A square system that must be solved is numerically singular.
struct SingularityError : Error {
  double smallest_singular_value;
  SingularityError(const std::string& msg, double sigma_min)
      : Error(msg), smallest_singular_value(sigma_min) {}
};

// The whole input collapses to zero (e.g. the zero polynomial handed to a
// root finder).
struct DegenerateInputError : Error {
  using Error::Error;
};

// Degree below the minimum the construction is defined for; callers route
// such inputs to the constant/linear path instead.
struct DegenerateDegreeError : Error {
  using Error::Error;
};

// A pencil with identically singular determinant where a regular one is
// required.
struct SingularPencilError : Error {
  using Error::Error;
};

// A documented precondition was violated at run time.
struct PreconditionError : Error {
  using Error::Error;
};

// Invariant breakage inside the library itself, typically a sign that a
// rank tolerance is badly matched to the data.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace strongmin

#endif  // STRONGMIN_ERRORS_HPP
