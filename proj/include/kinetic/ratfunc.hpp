#pragma once

#include <memory>
#include <vector>

#include "kinetic/poly.hpp"

namespace kinetic {

/// The declared irreducible denominator factors of a geometry. Every RatFunc
/// denominator is a product of these with nonnegative integer powers, so
/// reduction only ever needs exact divisibility tests against this list.
class FactorSet {
 public:
  FactorSet() = default;
  explicit FactorSet(std::vector<SpacePoly> factors)
      : factors_(std::move(factors)) {}

  size_t size() const { return factors_.size(); }
  const SpacePoly& factor(size_t k) const { return factors_[k]; }
  const std::vector<SpacePoly>& factors() const { return factors_; }

 private:
  std::vector<SpacePoly> factors_;
};

using FactorSetPtr = std::shared_ptr<const FactorSet>;

/// Rational function num / prod_k factor_k^pow_k over a declared factor set.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(SpacePoly num, FactorSetPtr facs = nullptr)
      : num_(std::move(num)), facs_(std::move(facs)) {
    if (facs_) den_.assign(facs_->size(), 0);
  }
  RatFunc(SpacePoly num, std::vector<int> denPowers, FactorSetPtr facs)
      : num_(std::move(num)), den_(std::move(denPowers)), facs_(std::move(facs)) {
    reduce();
  }

  static RatFunc constant(int dim, const Scalar& c, FactorSetPtr facs = nullptr) {
    return RatFunc(SpacePoly::constant(dim, c), std::move(facs));
  }

  const SpacePoly& num() const { return num_; }
  const std::vector<int>& denPowers() const { return den_; }
  const FactorSetPtr& factorSet() const { return facs_; }
  int dim() const { return num_.dim(); }

  bool isZero() const { return num_.isZero(); }
  bool isPolynomial() const {
    for (int p : den_)
      if (p > 0) return false;
    return true;
  }

  /// Denominator as an explicit polynomial (product of declared factors).
  SpacePoly denPoly() const;

  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return a + (-b);
  }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const Scalar& c) {
    RatFunc r = a;
    r.num_ = r.num_ * c;
    if (r.num_.isZero()) r.clearDen();
    return r;
  }
  friend RatFunc operator*(const Scalar& c, const RatFunc& a) { return a * c; }
  friend RatFunc operator*(const RatFunc& a, const SpacePoly& p);
  friend RatFunc operator*(const SpacePoly& p, const RatFunc& a) {
    return a * p;
  }

  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }

  /// Division restricted to nonzero scalars and declared factor monomials.
  /// Throws DenominatorNotDeclared otherwise.
  RatFunc divide(const RatFunc& d) const;

  /// Multiplies by factor_k^pow (pow may be negative).
  RatFunc shiftFactor(size_t k, int pow) const;

  /// Quotient-rule partial derivative; stays inside the declared factor set.
  RatFunc diff(int var) const;

  /// Exact equality via cross-multiplication.
  friend bool operator==(const RatFunc& a, const RatFunc& b);
  friend bool operator!=(const RatFunc& a, const RatFunc& b) {
    return !(a == b);
  }

  /// Evaluate at a point. `tooSmall(f)` decides whether a denominator factor
  /// value trips the singularity guard; on a trip, `singular` is set and 0 is
  /// returned.
  template <typename T, typename Conv, typename Guard>
  T evalGeneric(const std::vector<T>& pt, Conv conv, Guard tooSmall,
                bool* singular) const {
    T n = num_.evalGeneric<T, Conv>(pt, conv);
    for (size_t k = 0; k < den_.size(); ++k) {
      if (den_[k] == 0) continue;
      T f = facs_->factor(k).evalGeneric<T, Conv>(pt, conv);
      if (den_[k] > 0 && tooSmall(f)) {
        if (singular) *singular = true;
        return T(0);
      }
      for (int j = 0; j < den_[k]; ++j) n = n / f;
    }
    return n;
  }

 private:
  void reduce();
  void clearDen() {
    for (int& p : den_) p = 0;
  }
  void alignWith(const RatFunc& o);

  SpacePoly num_;
  std::vector<int> den_;  // one power per declared factor
  FactorSetPtr facs_;
};

/// Max denominator power per factor across a collection; used to clear a
/// whole expression to polynomial form before per-monomial zero tests.
struct DenProfile {
  std::vector<int> pow;
  void absorb(const RatFunc& r) {
    if (pow.size() < r.denPowers().size()) pow.resize(r.denPowers().size(), 0);
    for (size_t k = 0; k < r.denPowers().size(); ++k)
      pow[k] = std::max(pow[k], r.denPowers()[k]);
  }
  /// r * prod factor^pow, which is a polynomial whenever `pow` dominates.
  SpacePoly clear(const RatFunc& r) const;
};

}  // namespace kinetic
