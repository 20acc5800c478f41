#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>

namespace kinetic {

/// Gaussian rational a + b*i with arbitrary-precision rational parts.
/// This is the coefficient field of the whole engine; every operation is
/// exact and results are kept in canonical reduced form by GMP.
class Scalar {
 public:
  Scalar() : re_(0), im_(0) {}
  Scalar(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
  Scalar(const mpq_class& re) : re_(re), im_(0) { re_.canonicalize(); }
  Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Scalar rational(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(q);
  }
  static Scalar imaginary(long num = 1, long den = 1) {
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(mpq_class(0), q);
  }
  static Scalar i() { return imaginary(); }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool isZero() const { return re_ == 0 && im_ == 0; }
  bool isOne() const { return re_ == 1 && im_ == 0; }
  bool isReal() const { return im_ == 0; }

  Scalar operator-() const { return Scalar(-re_, -im_); }
  Scalar conj() const { return Scalar(re_, -im_); }

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Deterministic total order (re first, then im); used for map keys and
  /// canonical pivot/tie-breaking, not for any analytic meaning.
  friend bool operator<(const Scalar& a, const Scalar& b) {
    int c = cmp(a.re_, b.re_);
    if (c != 0) return c < 0;
    return cmp(a.im_, b.im_) < 0;
  }

  Scalar inverse() const;

  /// Rough operand size used by the pivoting heuristic: total limb count of
  /// all four integer components.
  size_t digitSize() const;

  std::complex<double> toComplexDouble() const {
    return {re_.get_d(), im_.get_d()};
  }

  /// Canonical text form: "3/4", "-1/2i", "3/4+1/2i", "2-3i", "0".
  std::string str() const;

  /// Parses the canonical text form. Throws ParseError on malformed input.
  static Scalar parse(const std::string& text);

 private:
  mpq_class re_, im_;
};

inline Scalar Scalar::inverse() const {
  mpq_class n = re_ * re_ + im_ * im_;
  return Scalar(re_ / n, -im_ / n);
}

inline Scalar& Scalar::operator/=(const Scalar& o) {
  return *this *= o.inverse();
}

}  // namespace kinetic
