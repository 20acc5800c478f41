#pragma once

#include <stdexcept>
#include <string>

namespace kinetic {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Total degree above the hard cap (32), or a velocity degree outside the
// closed range supported by the total-derivative operator.
struct DegreeOverflow : Error {
  using Error::Error;
};

// Supplied inverse metric fails gamma * gamma^{-1} == I exactly.
struct InverseMismatch : Error {
  using Error::Error;
};

// A rational operation produced a denominator factor outside the declared set.
struct DenominatorNotDeclared : Error {
  using Error::Error;
};

struct EmptyAnsatz : Error {
  using Error::Error;
};

struct LambdaZero : Error {
  using Error::Error;
};

struct NotApplicable : Error {
  using Error::Error;
};

struct MissingPotential : Error {
  using Error::Error;
};

// Trajectory hit the guard band around a denominator zero.
struct SingularityHit : Error {
  using Error::Error;
};

struct ExpectationMismatch : Error {
  using Error::Error;
};

struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg + " (line " + std::to_string(line_) + ", column " +
              std::to_string(col_) + ")"),
        line(line_),
        column(col_) {}
};

}  // namespace kinetic
