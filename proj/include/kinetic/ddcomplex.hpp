#pragma once

#include <cmath>
#include <complex>

namespace kinetic {

/// Double-double value: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
/// Gives ~31 decimal digits; used by the integrator and the first-integral
/// evaluator so that e^{lambda t} amplification at t_end does not swamp the
/// RK4 truncation signal.
struct DD {
  double hi = 0, lo = 0;

  DD() = default;
  DD(double h) : hi(h), lo(0) {}  // NOLINT(google-explicit-constructor)
  DD(double h, double l) : hi(h), lo(l) {}

  static DD twoSum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
  }
  static DD quickTwoSum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
  }
  static DD twoProd(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
  }

  friend DD operator+(const DD& a, const DD& b) {
    DD s = twoSum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quickTwoSum(s.hi, s.lo);
  }
  friend DD operator-(const DD& a, const DD& b) {
    return a + DD(-b.hi, -b.lo);
  }
  DD operator-() const { return {-hi, -lo}; }
  friend DD operator*(const DD& a, const DD& b) {
    DD p = twoProd(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quickTwoSum(p.hi, p.lo);
  }
  friend DD operator/(const DD& a, const DD& b) {
    double q1 = a.hi / b.hi;
    DD r = a - b * DD(q1);
    double q2 = r.hi / b.hi;
    r = r - b * DD(q2);
    double q3 = r.hi / b.hi;
    DD q = quickTwoSum(q1, q2);
    return q + DD(q3);
  }
  double toDouble() const { return hi + lo; }
};

struct DDC {
  DD re, im;

  DDC() = default;
  DDC(double r) : re(r) {}  // NOLINT(google-explicit-constructor)
  DDC(DD r, DD i) : re(r), im(i) {}
  DDC(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}

  friend DDC operator+(const DDC& a, const DDC& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend DDC operator-(const DDC& a, const DDC& b) {
    return {a.re - b.re, a.im - b.im};
  }
  DDC operator-() const { return {-re, -im}; }
  friend DDC operator*(const DDC& a, const DDC& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend DDC operator/(const DDC& a, const DDC& b) {
    DD n = b.re * b.re + b.im * b.im;
    DDC num = a * DDC(b.re, -b.im);
    return {num.re / n, num.im / n};
  }
  std::complex<double> toComplexDouble() const {
    return {re.toDouble(), im.toDouble()};
  }
  double absDouble() const { return std::abs(toComplexDouble()); }

  /// Taylor exponential; intended for small |z| (profile steps lambda * h).
  static DDC expSmall(const DDC& z) {
    DDC term(1.0);
    DDC acc(1.0);
    for (int k = 1; k <= 24; ++k) {
      term = term * z / DDC(static_cast<double>(k));
      acc = acc + term;
      if (term.absDouble() < 1e-40) break;
    }
    return acc;
  }
};

}  // namespace kinetic
