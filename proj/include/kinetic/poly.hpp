#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "kinetic/errors.hpp"
#include "kinetic/scalar.hpp"

namespace kinetic {

constexpr int kMaxVars = 8;
constexpr int kMaxTotalDegree = 32;

/// Exponent tuple of a monomial in the space coordinates (or velocities).
struct Expo {
  std::array<uint8_t, kMaxVars> e{};

  int total() const { return std::accumulate(e.begin(), e.end(), 0); }
  int operator[](int k) const { return e[k]; }

  Expo plus(const Expo& o) const {
    Expo r;
    for (int k = 0; k < kMaxVars; ++k) {
      int s = e[k] + o.e[k];
      r.e[k] = static_cast<uint8_t>(s);
    }
    if (r.total() > kMaxTotalDegree)
      throw DegreeOverflow("monomial total degree exceeds " +
                           std::to_string(kMaxTotalDegree));
    return r;
  }

  static Expo unit(int var, int pow = 1) {
    Expo r;
    r.e[var] = static_cast<uint8_t>(pow);
    return r;
  }

  friend bool operator==(const Expo& a, const Expo& b) { return a.e == b.e; }
};

/// Graded-lex with the larger monomial first; drives canonical printing.
struct GrlexGreater {
  bool operator()(const Expo& a, const Expo& b) const {
    int ta = a.total(), tb = b.total();
    if (ta != tb) return ta > tb;
    return a.e > b.e;
  }
};

/// Multivariate polynomial over Scalar. No zero coefficients are stored and
/// term order is canonical, so equality is plain map equality.
class SpacePoly {
 public:
  using TermMap = std::map<Expo, Scalar, GrlexGreater>;

  SpacePoly() : dim_(0) {}
  explicit SpacePoly(int dim) : dim_(dim) {}

  static SpacePoly constant(int dim, const Scalar& c) {
    SpacePoly p(dim);
    if (!c.isZero()) p.terms_[Expo{}] = c;
    return p;
  }
  static SpacePoly variable(int dim, int var, const Scalar& c = Scalar(1)) {
    SpacePoly p(dim);
    if (!c.isZero()) p.terms_[Expo::unit(var)] = c;
    return p;
  }
  static SpacePoly monomial(int dim, const Expo& m, const Scalar& c) {
    SpacePoly p(dim);
    if (!c.isZero()) p.terms_[m] = c;
    return p;
  }

  int dim() const { return dim_; }
  bool isZero() const { return terms_.empty(); }
  bool isConstant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first.total() == 0);
  }
  Scalar constantTerm() const {
    auto it = terms_.find(Expo{});
    return it == terms_.end() ? Scalar(0) : it->second;
  }
  int degree() const {
    return terms_.empty() ? -1 : terms_.begin()->first.total();
  }
  const TermMap& terms() const { return terms_; }
  size_t termCount() const { return terms_.size(); }

  void add(const Expo& m, const Scalar& c) {
    if (c.isZero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.isZero()) terms_.erase(it);
    }
  }

  SpacePoly& operator+=(const SpacePoly& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  SpacePoly& operator-=(const SpacePoly& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend SpacePoly operator+(SpacePoly a, const SpacePoly& b) { return a += b; }
  friend SpacePoly operator-(SpacePoly a, const SpacePoly& b) { return a -= b; }
  SpacePoly operator-() const {
    SpacePoly r(dim_);
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
  }

  friend SpacePoly operator*(const SpacePoly& a, const SpacePoly& b) {
    SpacePoly r(std::max(a.dim_, b.dim_));
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add(ma.plus(mb), ca * cb);
    return r;
  }
  friend SpacePoly operator*(const SpacePoly& a, const Scalar& c) {
    SpacePoly r(a.dim_);
    if (c.isZero()) return r;
    for (const auto& [m, v] : a.terms_) r.terms_[m] = v * c;
    return r;
  }
  friend SpacePoly operator*(const Scalar& c, const SpacePoly& a) {
    return a * c;
  }
  SpacePoly& operator*=(const Scalar& c) { return *this = *this * c; }

  friend bool operator==(const SpacePoly& a, const SpacePoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const SpacePoly& a, const SpacePoly& b) {
    return !(a == b);
  }

  /// Exact partial derivative with respect to coordinate `var`.
  SpacePoly diff(int var) const {
    SpacePoly r(dim_);
    for (const auto& [m, c] : terms_) {
      if (m.e[var] == 0) continue;
      Expo m2 = m;
      m2.e[var] -= 1;
      r.add(m2, c * Scalar(m.e[var]));
    }
    return r;
  }

  /// Attempts exact division by `d`; returns false when there is a nonzero
  /// remainder. Used for cancelling declared denominator factors.
  bool tryDivide(const SpacePoly& d, SpacePoly& quotient) const;

  template <typename T>
  T eval(const std::vector<T>& point,
         const T& (*reCast)(const Scalar&) = nullptr) const = delete;

  std::complex<double> evalComplex(
      const std::vector<std::complex<double>>& pt) const {
    return evalGeneric<std::complex<double>>(
        pt, [](const Scalar& s) { return s.toComplexDouble(); });
  }

  Scalar evalScalar(const std::vector<Scalar>& pt) const {
    return evalGeneric<Scalar>(pt, [](const Scalar& s) { return s; });
  }

  template <typename T, typename Conv>
  T evalGeneric(const std::vector<T>& pt, Conv conv) const {
    T acc = T(0);
    for (const auto& [m, c] : terms_) {
      T term = conv(c);
      for (int k = 0; k < dim_; ++k)
        for (int j = 0; j < m.e[k]; ++j) term = term * pt[k];
      acc = acc + term;
    }
    return acc;
  }

  /// Substitute coordinates by polynomials (used for parameter binding).
  SpacePoly substitute(const std::vector<SpacePoly>& repl) const {
    SpacePoly acc(repl.empty() ? dim_ : repl[0].dim());
    for (const auto& [m, c] : terms_) {
      SpacePoly term = SpacePoly::constant(acc.dim(), c);
      for (int k = 0; k < dim_; ++k)
        for (int j = 0; j < m.e[k]; ++j) term = term * repl[k];
      acc += term;
    }
    return acc;
  }

 private:
  int dim_;
  TermMap terms_;
};

}  // namespace kinetic
