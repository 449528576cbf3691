#pragma once

#include <stdexcept>

namespace hlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };
struct IncompleteSequence : Error { using Error::Error; };
struct DegenerateConstraint : Error { using Error::Error; };
struct OrderTooSmall : Error { using Error::Error; };
struct UnsupportedDegree : Error { using Error::Error; };
struct UnsupportedProblem : Error { using Error::Error; };
struct InvalidDecomposition : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct SolverError : Error { using Error::Error; };

}  // namespace hlab
