#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kinetic/velocity.hpp"

namespace kinetic {

using PolyMatrix = std::vector<std::vector<SpacePoly>>;
using RatMatrix = std::vector<std::vector<RatFunc>>;
using RatVector = std::vector<RatFunc>;

/// Kinetic metric with its exact inverse and Christoffel table. All index
/// raising/lowering in the engine goes through this object.
struct Geometry {
  int dim = 0;
  std::vector<std::string> coords;
  FactorSetPtr factors;
  PolyMatrix metric;         // gamma_ab, symmetric
  RatMatrix inverseMetric;   // gamma^ab
  std::vector<RatMatrix> christoffel;  // christoffel[a][b][c] = Gamma^a_bc

  RatFunc lower(const RatVector& up, int a) const {
    RatFunc r(SpacePoly(dim), factors);
    for (int b = 0; b < dim; ++b) r += up[b] * metric[a][b];
    return r;
  }
  RatFunc raise(const RatVector& down, int a) const {
    RatFunc r(SpacePoly(dim), factors);
    for (int b = 0; b < dim; ++b) r += inverseMetric[a][b] * down[b];
    return r;
  }
};

/// Builds and verifies a geometry from a symmetric metric and its supplied
/// exact inverse. Throws InverseMismatch when gamma * inverse != identity and
/// DenominatorNotDeclared when a Christoffel needs an undeclared factor.
Geometry build_geometry(const PolyMatrix& metric, const RatMatrix& inverse,
                        FactorSetPtr factors,
                        std::vector<std::string> coordNames);

/// Symmetrized covariant derivative L_(a;b) of a covariant vector.
RatMatrix sym_cov_deriv(const RatVector& L, const Geometry& g);

/// Autonomous holonomic system qddot^a = -Gamma qdot qdot - Q^a + A^a_b qdot^b.
struct DynamicalSystem {
  Geometry geometry;
  std::vector<SpacePoly> Q;  // contravariant generalized forces Q^a
  PolyMatrix A;              // A^a_b
  std::optional<SpacePoly> V;

  /// Covariant generalized-force components F_a of F^a = -P^a + A^a_b qdot^b
  /// where P^a = Q^a - gamma^ab V_,b. Requires V.
  std::vector<VelocityExpr> covariantForces() const;

  bool isFree() const;     // Q == 0 and A == 0
  bool hasZeroA() const;
};

/// Substitutes qdot^a = gamma^ab p_b; the result lives in canonical.hpp's
/// PhaseFunction but shares the VelocityExpr layout (monomials now in p).
VelocityExpr momentum_map(const VelocityExpr& expr, const Geometry& g);

}  // namespace kinetic
