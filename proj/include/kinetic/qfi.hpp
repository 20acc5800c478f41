#pragma once

#include <complex>

#include "kinetic/killing.hpp"
#include "kinetic/linalg.hpp"

namespace kinetic {

/// One profiled block of a quadratic first integral:
/// profile(t) * (Kab qd qd + Ka qd + K).
struct QFITerm {
  Profile profile;
  RatMatrix Kab;  // symmetric
  RatVector Ka;
  RatFunc K;
};

struct QFI {
  enum class Origin { Integral1, Integral2, Split, External };

  int dim = 0;
  std::vector<QFITerm> terms;
  Origin origin = Origin::External;
  int chainLength = -1;   // Integral1 provenance
  Scalar lambda;          // Integral2 provenance
  Scalar s;               // the constant L_(n)a Q^a when meaningful

  VelocityExpr toVelocityExpr() const;
  static QFI fromVelocityExpr(const VelocityExpr& e, int dim,
                              FactorSetPtr facs);

  bool isZero() const;
};

struct SolutionSpace {
  std::vector<QFI> basis;   // independent modulo the constant integral
  int chainLength = -1;
  std::optional<Scalar> lambda;
  size_t unknowns = 0;
  size_t constraintRows = 0;
};

/// Ansatz for the Theorem-2 searches. When `family` is empty the KT family
/// is computed by solve_kt with `ktDegree`.
struct SearchAnsatz {
  std::optional<KTFamily> family;
  int ktDegree = 2;
  int lDegree = 3;
  int gDegree = 4;
};

/// Integral 1: time-polynomial chain of length n built from the triplet
/// (C_(0)ab, L_(0)a, G); higher members eliminated by the recursion.
SolutionSpace find_integral1(const DynamicalSystem& sys, int n,
                             const SearchAnsatz& ansatz);

/// Convergence helper: raises n from `startN` until the solution dimension
/// stabilizes twice in a row (capped at n = 6).
SolutionSpace find_integral1_auto(const DynamicalSystem& sys,
                                  const SearchAnsatz& ansatz, int startN = 2,
                                  int cap = 6);

/// Integral 2: J2 = e^{lambda t}(lambda C qd qd + lambda L qd + L_a Q^a).
SolutionSpace find_integral2(const DynamicalSystem& sys, const Scalar& lambda,
                             const SearchAnsatz& ansatz);

enum class ScanMode { ExactCandidates, MinorRoots, FloatSweep };

struct LambdaScanResult {
  std::vector<Scalar> exact;  // every entry passes the exact rank-drop test
  std::vector<std::complex<double>> floatCandidates;
  int genericRank = 0;
  int unknownCount = 0;
};

/// Finds lambda values with nontrivial Integral-2 spaces. Exact mode tests a
/// candidate list (heuristic products of A-entries when none given);
/// minor-roots extracts roots of the gcd of random maximal minors of the
/// condition matrix M(lambda); float-sweep scans a real grid numerically.
LambdaScanResult lambda_scan(const DynamicalSystem& sys,
                             const SearchAnsatz& ansatz, ScanMode mode,
                             const std::vector<Scalar>& candidates = {},
                             uint64_t seed = 1);

/// Theorem-3 even/odd split for A = 0 systems. Throws NotApplicable
/// otherwise. Both parts re-verify exactly.
std::pair<SolutionSpace, SolutionSpace> theorem3_split(
    const SolutionSpace& sol, const DynamicalSystem& sys);

// -- span utilities (exact, over the term-signature vectorization) ----------

/// True iff `candidate` lies in span(basis) modulo the constant integral.
bool span_contains(const std::vector<QFI>& basis, const QFI& candidate);

bool same_qfi_span(const std::vector<QFI>& a, const std::vector<QFI>& b);

int qfi_span_rank(const std::vector<QFI>& qfis);

/// Greedy reduction to a linearly independent subset (stable order).
std::vector<QFI> prune_to_basis(const std::vector<QFI>& qfis);

/// Parse a first-integral expression (velocities as d<coord>, time profiles
/// via t and exp(c*t)) into a QFI for verification and span checks.
QFI parse_qfi(const std::string& text, const DynamicalSystem& sys);

}  // namespace kinetic
