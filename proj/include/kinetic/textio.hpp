#pragma once

#include <map>
#include <string>

#include "kinetic/velocity.hpp"

namespace kinetic {

/// Symbol environment for the expression parser. Coordinates are identifiers,
/// velocities are `d` + coordinate name, `t` is time, `i` the imaginary unit,
/// parameter names bind to exact Scalar constants.
struct ParseContext {
  std::vector<std::string> coords;
  std::map<std::string, Scalar> params;
  FactorSetPtr factors;
  bool allowVelocities = false;
  bool allowTime = false;
};

/// Parses `3/4*i*x^2*y - 2*z`, `t*(dy - x) + dx - y`,
/// `exp(2*t)*(dx^2 - dy^2)` and the like. Throws ParseError with position.
VelocityExpr parse_expression(const std::string& text, const ParseContext& ctx);

/// Restricted entry points; they reject velocities/time/denominators.
SpacePoly parse_poly(const std::string& text, const ParseContext& ctx);
RatFunc parse_ratfunc(const std::string& text, const ParseContext& ctx);

/// Canonical printing (graded-lex term order, descending).
std::string poly_str(const SpacePoly& p, const std::vector<std::string>& names);
std::string ratfunc_str(const RatFunc& r, const std::vector<std::string>& names);
std::string velocity_str(const VelocityExpr& e,
                         const std::vector<std::string>& coords,
                         const std::string& velPrefix = "d");

}  // namespace kinetic
