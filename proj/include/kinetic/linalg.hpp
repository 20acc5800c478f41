#pragma once

#include <optional>
#include <vector>

#include "kinetic/prng.hpp"
#include "kinetic/scalar.hpp"

namespace kinetic {

/// Dense matrix of exact Scalars.
class ScalarMatrix {
 public:
  ScalarMatrix() : rows_(0), cols_(0) {}
  ScalarMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Scalar& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const Scalar& at(int r, int c) const {
    return a_[static_cast<size_t>(r) * cols_ + c];
  }

  static ScalarMatrix identity(int n) {
    ScalarMatrix m(n, n);
    for (int k = 0; k < n; ++k) m.at(k, k) = Scalar(1);
    return m;
  }

 private:
  int rows_, cols_;
  std::vector<Scalar> a_;
};

/// Sparse row-major matrix used by all big condition systems.
class SparseMatrix {
 public:
  using Row = std::vector<std::pair<int, Scalar>>;  // sorted by column

  explicit SparseMatrix(int cols) : cols_(cols) {}

  int cols() const { return cols_; }
  size_t rowCount() const { return rows_.size(); }
  const std::vector<Row>& rows() const { return rows_; }

  void addRow(Row row);
  static SparseMatrix fromDense(const ScalarMatrix& m);

  std::vector<Scalar> multiply(const std::vector<Scalar>& v) const;

 private:
  int cols_;
  std::vector<Row> rows_;
};

/// Exact kernel basis. Vectors are integer-content-normalized with positive
/// leading entry; the result is verified by exact multiplication M v = 0.
std::vector<std::vector<Scalar>> nullspace(const SparseMatrix& m);

int sparse_rank(const SparseMatrix& m);

/// Row/column indices of one maximal nonsingular submatrix (sorted).
struct PivotSelection {
  std::vector<int> rows, cols;
  int rank = 0;
};
PivotSelection pivot_selection(const SparseMatrix& m);

/// Affine solve of an augmented system [A | b] (b in the last column).
/// Returns a particular solution with free variables set to 0, or nullopt
/// when the system is inconsistent.
std::optional<std::vector<Scalar>> solve_affine(const SparseMatrix& aug);

/// Fraction-free determinant of a dense matrix (Bareiss).
Scalar determinant(ScalarMatrix m);

// ---------------------------------------------------------------------------
// univariate polynomials in one scan symbol over Scalar

class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) {
    trim();
  }
  static UniPoly constant(const Scalar& s) { return UniPoly({s}); }
  static UniPoly x() { return UniPoly({Scalar(0), Scalar(1)}); }

  bool isZero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar coeff(int k) const {
    return k < static_cast<int>(c_.size()) ? c_[k] : Scalar(0);
  }

  Scalar eval(const Scalar& x) const {
    Scalar acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  UniPoly derivative() const;
  UniPoly monic() const;

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const Scalar& s);

  /// Euclidean division; remainder has degree < divisor degree.
  static void divmod(const UniPoly& a, const UniPoly& b, UniPoly& q,
                     UniPoly& r);

  static UniPoly gcd(UniPoly a, UniPoly b);

  /// All complex roots by the Aberth-Ehrlich iteration (double precision).
  std::vector<std::complex<double>> complexRoots() const;

 private:
  void trim() {
    while (!c_.empty() && c_.back().isZero()) c_.pop_back();
  }
  std::vector<Scalar> c_;  // ascending powers
};

/// Sparse matrix with UniPoly entries (the Integral-2 condition system as a
/// function of lambda).
class SparseUniMatrix {
 public:
  using Row = std::vector<std::pair<int, UniPoly>>;

  explicit SparseUniMatrix(int cols) : cols_(cols) {}
  int cols() const { return cols_; }
  size_t rowCount() const { return rows_.size(); }
  const std::vector<Row>& rows() const { return rows_; }
  void addRow(Row row);

  SparseMatrix evalAt(const Scalar& lambda) const;

  /// Exact rank with lambda substituted.
  int rankAt(const Scalar& lambda) const { return sparse_rank(evalAt(lambda)); }

  /// Determinant of the square submatrix (rowIdx x colIdx), computed by
  /// evaluation at degree+1 points and exact Lagrange interpolation.
  UniPoly minorDet(const std::vector<int>& rowIdx,
                   const std::vector<int>& colIdx) const;

 private:
  int cols_;
  std::vector<Row> rows_;
};

/// Nearby rational with bounded denominator via continued fractions.
std::optional<mpq_class> rationalize(double x, long maxDen = 1000000,
                                     double tol = 1e-7);

}  // namespace kinetic
