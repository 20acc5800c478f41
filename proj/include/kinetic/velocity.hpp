#pragma once

#include <map>

#include "kinetic/ratfunc.hpp"

namespace kinetic {

struct DynamicalSystem;

/// Time profile e^{lambda t} t^n. lambda = 0 gives the plain powers t^n.
/// Profiles with different lambda are linearly independent functions, so an
/// expression vanishes iff it vanishes bucket by bucket.
struct Profile {
  Scalar lambda;
  int tpow = 0;

  friend bool operator==(const Profile& a, const Profile& b) {
    return a.tpow == b.tpow && a.lambda == b.lambda;
  }
  friend bool operator<(const Profile& a, const Profile& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.tpow < b.tpow;
  }
};

/// Sum of profile(t) * coeff(q) * qdot^alpha terms with RatFunc coefficients.
/// Velocity degree is at most 3 (the image of a quadratic under d/dt).
class VelocityExpr {
 public:
  using CoeffMap = std::map<Expo, RatFunc, GrlexGreater>;

  VelocityExpr() : dim_(0) {}
  explicit VelocityExpr(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  const std::map<Profile, CoeffMap>& buckets() const { return buckets_; }

  bool isZero() const {
    for (const auto& [p, cm] : buckets_)
      for (const auto& [e, c] : cm)
        if (!c.isZero()) return false;
    return true;
  }

  int velocityDegree() const {
    int d = -1;
    for (const auto& [p, cm] : buckets_)
      for (const auto& [e, c] : cm)
        if (!c.isZero()) d = std::max(d, e.total());
    return d;
  }

  void add(const Profile& p, const Expo& vmono, const RatFunc& coeff) {
    if (coeff.isZero()) return;
    auto& cm = buckets_[p];
    auto [it, inserted] = cm.try_emplace(vmono, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second.isZero()) cm.erase(it);
    }
    if (cm.empty()) buckets_.erase(p);
  }

  VelocityExpr& operator+=(const VelocityExpr& o) {
    for (const auto& [p, cm] : o.buckets_)
      for (const auto& [e, c] : cm) add(p, e, c);
    return *this;
  }
  friend VelocityExpr operator+(VelocityExpr a, const VelocityExpr& b) {
    return a += b;
  }
  VelocityExpr operator-() const {
    VelocityExpr r(dim_);
    for (const auto& [p, cm] : buckets_)
      for (const auto& [e, c] : cm) r.add(p, e, -c);
    return r;
  }
  friend VelocityExpr operator-(VelocityExpr a, const VelocityExpr& b) {
    return a += -b;
  }
  friend VelocityExpr operator*(const VelocityExpr& a, const Scalar& c) {
    VelocityExpr r(a.dim_);
    for (const auto& [p, cm] : a.buckets_)
      for (const auto& [e, co] : cm) r.add(p, e, co * c);
    return r;
  }
  friend VelocityExpr operator*(const VelocityExpr& a, const VelocityExpr& b);

  /// Drops terms whose coefficient normalizes to zero; keeps maps canonical.
  void prune() {
    for (auto it = buckets_.begin(); it != buckets_.end();) {
      for (auto jt = it->second.begin(); jt != it->second.end();)
        jt = jt->second.isZero() ? it->second.erase(jt) : std::next(jt);
      it = it->second.empty() ? buckets_.erase(it) : std::next(it);
    }
  }

 private:
  int dim_;
  std::map<Profile, CoeffMap> buckets_;
};

/// d/dt along the dynamics: differentiates profiles, applies qdot * d/dq and
/// substitutes qddot^a = -Gamma^a_bc qdot^b qdot^c - Q^a + A^a_b qdot^b.
VelocityExpr total_derivative(const VelocityExpr& expr,
                              const DynamicalSystem& sys);

}  // namespace kinetic
