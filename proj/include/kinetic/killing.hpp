#pragma once

#include <optional>

#include "kinetic/geometry.hpp"

namespace kinetic {

/// Basis of second-order Killing tensors of one geometry. Components are
/// polynomial; basis elements are linearly independent over Scalar.
struct KTFamily {
  int dim = 0;
  std::vector<PolyMatrix> basis;         // symmetric dim x dim matrices
  std::vector<std::string> paramNames;

  size_t size() const { return basis.size(); }
  /// Linear combination sum_k coeff[k] * basis[k].
  PolyMatrix combine(const std::vector<Scalar>& coeff) const;
};

/// Ansatz shape: component polynomials of total degree <= degree, each
/// optionally multiplied by declared denominator factors to powers from
/// `factorWindow` (inclusive upper bound per factor).
struct KTAnsatz {
  int degree = 2;
  int factorWindowMax = 2;
};

/// All KTs with components in the ansatz space: exact kernel of C_(ab;c) = 0
/// over the ansatz coefficients.
KTFamily solve_kt(const Geometry& g, int degree);
KTFamily solve_kt(const Geometry& g, const KTAnsatz& ansatz);

/// Re-verification used by tests and postconditions.
bool kt_equation_holds(const PolyMatrix& C, const Geometry& g);

/// Closed-form families.
KTFamily builtin_v2(const Scalar& eps);     // 6 parameters
KTFamily builtin_e3();                      // 20 parameters a1..a20
KTFamily builtin_e3_covariant();            // 20 parameters (A, B, lambda, D)

/// The Killing vectors of V^2 as covariant component vectors (b1, b2, b3).
std::vector<std::vector<SpacePoly>> v2_killing_vectors(const Scalar& eps);

struct ReduceResult {
  RatVector particular;                          // L with L_(a;b) = C
  std::vector<std::vector<SpacePoly>> kernel;    // Killing vectors of the ansatz
};

/// Solves C_ab = L_(a;b) for a generating vector within the polynomial
/// ansatz; nullopt when the KT is irreducible in that ansatz.
std::optional<ReduceResult> reduce_kt(const PolyMatrix& C, const Geometry& g,
                                      int degree);

/// Proposition-1 generating set for E^n: gradient KVs, rotations, the
/// homothetic vector, the products S_I S_J,a and S_I M_Ka. Symmetrized
/// derivatives of the span give every reducible KT; KVs map to zero and the
/// homothetic vector to the metric.
std::vector<std::vector<SpacePoly>> reducing_vectors(int n);

/// Exact rank of a family of symmetric polynomial matrices viewed as vectors.
int family_span_rank(const std::vector<PolyMatrix>& mats);

/// span(a) == span(b) via stacked rank.
bool same_family_span(const std::vector<PolyMatrix>& a,
                      const std::vector<PolyMatrix>& b);

}  // namespace kinetic
