#include "kinetic/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "kinetic/errors.hpp"

namespace kinetic {

void SparseMatrix::addRow(Row row) {
  std::sort(row.begin(), row.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Row merged;
  for (auto& [c, v] : row) {
    if (v.isZero()) continue;
    if (!merged.empty() && merged.back().first == c)
      merged.back().second += v;
    else
      merged.emplace_back(c, v);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const auto& e) { return e.second.isZero(); }),
               merged.end());
  // empty rows are kept so row indices stay aligned with the caller's list
  rows_.push_back(std::move(merged));
}

SparseMatrix SparseMatrix::fromDense(const ScalarMatrix& m) {
  SparseMatrix s(m.cols());
  for (int r = 0; r < m.rows(); ++r) {
    Row row;
    for (int c = 0; c < m.cols(); ++c)
      if (!m.at(r, c).isZero()) row.emplace_back(c, m.at(r, c));
    s.rows_.push_back(std::move(row));
  }
  return s;
}

std::vector<Scalar> SparseMatrix::multiply(const std::vector<Scalar>& v) const {
  std::vector<Scalar> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) {
    Scalar s(0);
    for (const auto& [c, val] : row) s += val * v[c];
    out.push_back(s);
  }
  return out;
}

namespace {

// Scale a row so every entry is a Gaussian integer with unit content and a
// canonical leading sign. This keeps the fraction-free elimination compact.
void normalizeRow(SparseMatrix::Row& row) {
  if (row.empty()) return;
  mpz_class denLcm = 1;
  for (const auto& [c, v] : row) {
    mpz_lcm(denLcm.get_mpz_t(), denLcm.get_mpz_t(),
            v.re().get_den().get_mpz_t());
    mpz_lcm(denLcm.get_mpz_t(), denLcm.get_mpz_t(),
            v.im().get_den().get_mpz_t());
  }
  mpz_class content = 0;
  for (auto& [c, v] : row) {
    mpq_class re = v.re() * denLcm, im = v.im() * denLcm;
    v = Scalar(re, im);
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), re.get_num().get_mpz_t());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), im.get_num().get_mpz_t());
  }
  if (content > 1) {
    for (auto& [c, v] : row)
      v = Scalar(v.re() / content, v.im() / content);
  }
  const Scalar& lead = row.front().second;
  bool flip = lead.re() < 0 || (lead.re() == 0 && lead.im() < 0);
  if (flip)
    for (auto& [c, v] : row) v = -v;
}

struct Echelon {
  std::vector<SparseMatrix::Row> pivotRows;  // in acquisition order
  std::vector<int> pivotCols;
  std::vector<int> pivotRowIds;  // original row indices
  std::vector<int> freeCols;
  std::vector<SparseMatrix::Row> leftoverRows;  // nonzero rows never pivoted
  int cols = 0;
};

// Fraction-free cross-multiplication elimination with per-row content
// reduction; pivot chosen by smallest entry size (tie: sparser row, lower
// indices) per the pivoting policy. `excludeCol` is never pivoted on (used
// for augmented right-hand sides).
Echelon eliminate(const SparseMatrix& m, int excludeCol = -1) {
  std::vector<SparseMatrix::Row> work = m.rows();
  for (auto& r : work) normalizeRow(r);

  Echelon e;
  e.cols = m.cols();
  std::vector<bool> colUsed(m.cols(), false);
  if (excludeCol >= 0) colUsed[excludeCol] = true;
  std::vector<bool> done(work.size(), false);

  while (true) {
    // pick pivot entry
    size_t bestRow = work.size();
    int bestCol = -1;
    size_t bestSize = 0;
    size_t bestNnz = 0;
    for (size_t r = 0; r < work.size(); ++r) {
      if (done[r] || work[r].empty()) continue;
      for (const auto& [c, v] : work[r]) {
        if (colUsed[c]) continue;
        size_t sz = v.digitSize();
        size_t nnz = work[r].size();
        bool better;
        if (bestRow == work.size())
          better = true;
        else if (sz != bestSize)
          better = sz < bestSize;
        else if (nnz != bestNnz)
          better = nnz < bestNnz;
        else
          better = false;
        if (better) {
          bestRow = r;
          bestCol = c;
          bestSize = sz;
          bestNnz = nnz;
        }
      }
    }
    if (bestRow == work.size()) break;

    SparseMatrix::Row piv = work[bestRow];
    done[bestRow] = true;
    Scalar pv(0);
    for (const auto& [c, v] : piv)
      if (c == bestCol) pv = v;

    for (size_t r = 0; r < work.size(); ++r) {
      if (done[r] || work[r].empty()) continue;
      Scalar rv(0);
      for (const auto& [c, v] : work[r])
        if (c == bestCol) rv = v;
      if (rv.isZero()) continue;
      // row <- pv * row - rv * piv   (fraction-free; content-reduced after)
      SparseMatrix::Row merged;
      auto it1 = work[r].begin(), it2 = piv.begin();
      while (it1 != work[r].end() || it2 != piv.end()) {
        if (it2 == piv.end() ||
            (it1 != work[r].end() && it1->first < it2->first)) {
          merged.emplace_back(it1->first, it1->second * pv);
          ++it1;
        } else if (it1 == work[r].end() || it2->first < it1->first) {
          merged.emplace_back(it2->first, -(it2->second * rv));
          ++it2;
        } else {
          Scalar s = it1->second * pv - it2->second * rv;
          if (!s.isZero()) merged.emplace_back(it1->first, s);
          ++it1;
          ++it2;
        }
      }
      normalizeRow(merged);
      work[r] = std::move(merged);
    }

    colUsed[bestCol] = true;
    e.pivotRows.push_back(std::move(piv));
    e.pivotCols.push_back(bestCol);
    e.pivotRowIds.push_back(static_cast<int>(bestRow));
  }

  for (int c = 0; c < m.cols(); ++c)
    if (!colUsed[c]) e.freeCols.push_back(c);
  if (excludeCol >= 0) e.freeCols.push_back(excludeCol);
  for (size_t r = 0; r < work.size(); ++r)
    if (!done[r] && !work[r].empty()) e.leftoverRows.push_back(work[r]);
  return e;
}

}  // namespace

int sparse_rank(const SparseMatrix& m) {
  return static_cast<int>(eliminate(m).pivotCols.size());
}

PivotSelection pivot_selection(const SparseMatrix& m) {
  Echelon e = eliminate(m);
  PivotSelection sel;
  sel.rows = e.pivotRowIds;
  sel.cols = e.pivotCols;
  sel.rank = static_cast<int>(e.pivotCols.size());
  std::sort(sel.rows.begin(), sel.rows.end());
  std::sort(sel.cols.begin(), sel.cols.end());
  return sel;
}

std::vector<std::vector<Scalar>> nullspace(const SparseMatrix& m) {
  Echelon e = eliminate(m);
  std::vector<std::vector<Scalar>> basis;
  for (int f : e.freeCols) {
    std::vector<Scalar> v(m.cols(), Scalar(0));
    v[f] = Scalar(1);
    // pivot rows in reverse acquisition order are triangular w.r.t. their own
    // pivot columns (later pivot rows have zeros in earlier pivot columns)
    for (int k = static_cast<int>(e.pivotRows.size()) - 1; k >= 0; --k) {
      const auto& row = e.pivotRows[k];
      int pc = e.pivotCols[k];
      Scalar sum(0), pv(0);
      for (const auto& [c, val] : row) {
        if (c == pc)
          pv = val;
        else
          sum += val * v[c];
      }
      v[pc] = -(sum / pv);
    }
    // integer-normalize for determinism
    SparseMatrix::Row asRow;
    for (int c = 0; c < m.cols(); ++c)
      if (!v[c].isZero()) asRow.emplace_back(c, v[c]);
    normalizeRow(asRow);
    std::fill(v.begin(), v.end(), Scalar(0));
    for (const auto& [c, val] : asRow) v[c] = val;
    // hard postcondition: exact kernel membership
    for (const Scalar& s : m.multiply(v))
      if (!s.isZero()) throw Error("internal: nullspace vector fails M v = 0");
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Scalar>> solve_affine(const SparseMatrix& aug) {
  // aug holds [A | b] with b in the last column, which is never pivoted on.
  const int rhs = aug.cols() - 1;
  Echelon e = eliminate(aug, rhs);
  for (const auto& row : e.leftoverRows)
    for (const auto& [c, v] : row)
      if (c == rhs && !v.isZero()) return std::nullopt;  // 0 = nonzero

  std::vector<Scalar> v(aug.cols(), Scalar(0));
  v[rhs] = Scalar(-1);  // interpret columns as A x - b
  for (int k = static_cast<int>(e.pivotRows.size()) - 1; k >= 0; --k) {
    const auto& row = e.pivotRows[k];
    int pc = e.pivotCols[k];
    Scalar sum(0), pv(0);
    for (const auto& [c, val] : row) {
      if (c == pc)
        pv = val;
      else
        sum += val * v[c];
    }
    v[pc] = -(sum / pv);
  }
  return std::vector<Scalar>(v.begin(), v.begin() + rhs);
}

Scalar determinant(ScalarMatrix m) {
  const int n = m.rows();
  if (n != m.cols()) throw Error("determinant of non-square matrix");
  if (n == 0) return Scalar(1);
  Scalar sign(1);
  Scalar prev(1);
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k).isZero()) {
      int swap = -1;
      for (int r = k + 1; r < n; ++r)
        if (!m.at(r, k).isZero()) {
          swap = r;
          break;
        }
      if (swap < 0) return Scalar(0);
      for (int c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(swap, c));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m.at(i, j) =
            (m.at(k, k) * m.at(i, j) - m.at(i, k) * m.at(k, j)) / prev;
    prev = m.at(k, k);
  }
  return sign * m.at(n - 1, n - 1);
}

// ---------------------------------------------------------------------------

UniPoly UniPoly::derivative() const {
  std::vector<Scalar> d;
  for (size_t k = 1; k < c_.size(); ++k)
    d.push_back(c_[k] * Scalar(static_cast<long>(k)));
  return UniPoly(std::move(d));
}

UniPoly UniPoly::monic() const {
  if (isZero()) return *this;
  Scalar inv = c_.back().inverse();
  std::vector<Scalar> d = c_;
  for (auto& s : d) s *= inv;
  return UniPoly(std::move(d));
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  std::vector<Scalar> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
  return UniPoly(std::move(c));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) {
  std::vector<Scalar> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t k = 0; k < c.size(); ++k)
    c[k] = a.coeff(k) - b.coeff(k);
  return UniPoly(std::move(c));
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.isZero() || b.isZero()) return UniPoly();
  std::vector<Scalar> c(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return UniPoly(std::move(c));
}

UniPoly operator*(const UniPoly& a, const Scalar& s) {
  std::vector<Scalar> c = a.c_;
  for (auto& x : c) x *= s;
  return UniPoly(std::move(c));
}

void UniPoly::divmod(const UniPoly& a, const UniPoly& b, UniPoly& q,
                     UniPoly& r) {
  if (b.isZero()) throw Error("univariate division by zero");
  std::vector<Scalar> rem = a.c_;
  std::vector<Scalar> quo;
  int db = b.degree();
  Scalar lead = b.c_.back();
  while (static_cast<int>(rem.size()) - 1 >= db) {
    while (!rem.empty() && rem.back().isZero()) rem.pop_back();
    if (static_cast<int>(rem.size()) - 1 < db) break;
    int shift = static_cast<int>(rem.size()) - 1 - db;
    Scalar f = rem.back() / lead;
    if (static_cast<int>(quo.size()) < shift + 1) quo.resize(shift + 1);
    quo[shift] = f;
    for (int k = 0; k <= db; ++k) rem[k + shift] -= f * b.c_[k];
  }
  q = UniPoly(std::move(quo));
  r = UniPoly(std::move(rem));
}

UniPoly UniPoly::gcd(UniPoly a, UniPoly b) {
  while (!b.isZero()) {
    UniPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<std::complex<double>> UniPoly::complexRoots() const {
  using C = std::complex<double>;
  int n = degree();
  if (n <= 0) return {};
  std::vector<C> c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = coeff(k).toComplexDouble();
  // deterministic start circle
  std::vector<C> z(n);
  double radius = 0;
  for (int k = 0; k < n; ++k)
    radius = std::max(radius, std::pow(std::abs(c[k] / c[n]), 1.0 / (n - k)));
  radius = std::max(radius, 0.5) * 1.2;
  for (int k = 0; k < n; ++k) {
    double ang = 2 * M_PI * k / n + 0.4;
    z[k] = radius * C(std::cos(ang), std::sin(ang));
  }
  auto evalBoth = [&](C x, C& p, C& dp) {
    p = c[n];
    dp = 0;
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * x + p;
      p = p * x + c[k];
    }
  };
  for (int iter = 0; iter < 200; ++iter) {
    double moved = 0;
    for (int i = 0; i < n; ++i) {
      C p, dp;
      evalBoth(z[i], p, dp);
      if (std::abs(p) < 1e-300) continue;
      C ratio = p / dp;
      C sum = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) sum += C(1) / (z[i] - z[j]);
      C delta = ratio / (C(1) - ratio * sum);
      z[i] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-14) break;
  }
  return z;
}

// ---------------------------------------------------------------------------

void SparseUniMatrix::addRow(Row row) {
  std::sort(row.begin(), row.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Row merged;
  for (auto& [c, v] : row) {
    if (v.isZero()) continue;
    if (!merged.empty() && merged.back().first == c)
      merged.back().second = merged.back().second + v;
    else
      merged.emplace_back(c, std::move(v));
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const auto& e) { return e.second.isZero(); }),
               merged.end());
  rows_.push_back(std::move(merged));
}

SparseMatrix SparseUniMatrix::evalAt(const Scalar& lambda) const {
  SparseMatrix out(cols_);
  for (const auto& row : rows_) {
    SparseMatrix::Row r;
    for (const auto& [c, p] : row) r.emplace_back(c, p.eval(lambda));
    out.addRow(std::move(r));
  }
  return out;
}

UniPoly SparseUniMatrix::minorDet(const std::vector<int>& rowIdx,
                                  const std::vector<int>& colIdx) const {
  const int n = static_cast<int>(rowIdx.size());
  // degree bound: sum over chosen rows of the max entry degree
  int degBound = 0;
  for (int r : rowIdx) {
    int d = 0;
    for (const auto& [c, p] : rows_[r]) d = std::max(d, p.degree());
    degBound += std::max(d, 0);
  }
  // evaluate at degBound+1 integer points and interpolate
  std::vector<Scalar> xs, ys;
  for (int t = 0; t <= degBound; ++t) {
    Scalar x(static_cast<long>(t));
    ScalarMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      for (const auto& [c, p] : rows_[rowIdx[i]]) {
        auto it = std::lower_bound(colIdx.begin(), colIdx.end(), c);
        if (it != colIdx.end() && *it == c)
          m.at(i, static_cast<int>(it - colIdx.begin())) = p.eval(x);
      }
    }
    xs.push_back(x);
    ys.push_back(determinant(std::move(m)));
  }
  // Lagrange interpolation
  UniPoly acc;
  for (size_t i = 0; i < xs.size(); ++i) {
    UniPoly term = UniPoly::constant(Scalar(1));
    Scalar denom(1);
    for (size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      term = term * (UniPoly::x() - UniPoly::constant(xs[j]));
      denom *= xs[i] - xs[j];
    }
    acc = acc + term * (ys[i] / denom);
  }
  return acc;
}

std::optional<mpq_class> rationalize(double x, long maxDen, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // continued fraction expansion
  double v = x;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(v);
    if (fl > 1e17 || fl < -1e17) return std::nullopt;
    long a = static_cast<long>(fl);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > maxDen) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = v - fl;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  if (q1 == 0) return std::nullopt;
  mpq_class q(p1, q1);
  q.canonicalize();
  if (std::abs(q.get_d() - x) > tol * std::max(1.0, std::abs(x)))
    return std::nullopt;
  return q;
}

}  // namespace kinetic
