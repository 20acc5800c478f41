#include "kinetic/ratfunc.hpp"

#include "kinetic/errors.hpp"

namespace kinetic {

void RatFunc::reduce() {
  if (num_.isZero()) {
    clearDen();
    return;
  }
  if (!facs_) return;
  for (size_t k = 0; k < den_.size(); ++k) {
    while (den_[k] > 0) {
      SpacePoly q;
      if (!num_.tryDivide(facs_->factor(k), q)) break;
      num_ = std::move(q);
      --den_[k];
    }
    // negative powers are multiplied back into the numerator
    while (den_[k] < 0) {
      num_ = num_ * facs_->factor(k);
      ++den_[k];
    }
  }
}

void RatFunc::alignWith(const RatFunc& o) {
  if (!facs_ && o.facs_) {
    facs_ = o.facs_;
    den_.assign(facs_->size(), 0);
  }
}

SpacePoly RatFunc::denPoly() const {
  SpacePoly d = SpacePoly::constant(num_.dim(), Scalar(1));
  for (size_t k = 0; k < den_.size(); ++k)
    for (int j = 0; j < den_[k]; ++j) d = d * facs_->factor(k);
  return d;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  RatFunc x = a, y = b;
  x.alignWith(y);
  y.alignWith(x);
  RatFunc r;
  r.facs_ = x.facs_;
  size_t nf = x.facs_ ? x.facs_->size() : 0;
  r.den_.assign(nf, 0);
  SpacePoly nx = x.num_, ny = y.num_;
  for (size_t k = 0; k < nf; ++k) {
    int px = k < x.den_.size() ? x.den_[k] : 0;
    int py = k < y.den_.size() ? y.den_[k] : 0;
    int p = std::max(px, py);
    r.den_[k] = p;
    for (int j = 0; j < p - px; ++j) nx = nx * x.facs_->factor(k);
    for (int j = 0; j < p - py; ++j) ny = ny * x.facs_->factor(k);
  }
  r.num_ = nx + ny;
  r.reduce();
  return r;
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  RatFunc x = a, y = b;
  x.alignWith(y);
  y.alignWith(x);
  RatFunc r;
  r.facs_ = x.facs_;
  size_t nf = x.facs_ ? x.facs_->size() : 0;
  r.den_.assign(nf, 0);
  for (size_t k = 0; k < nf; ++k)
    r.den_[k] = (k < x.den_.size() ? x.den_[k] : 0) +
                (k < y.den_.size() ? y.den_[k] : 0);
  r.num_ = x.num_ * y.num_;
  r.reduce();
  return r;
}

RatFunc operator*(const RatFunc& a, const SpacePoly& p) {
  RatFunc r = a;
  r.num_ = r.num_ * p;
  r.reduce();
  return r;
}

RatFunc RatFunc::divide(const RatFunc& d) const {
  if (d.isZero()) throw Error("division of rational function by zero");
  // scalar divisor
  if (d.isPolynomial() && d.num_.isConstant())
    return *this * d.num_.constantTerm().inverse();
  // divisor must be c * prod factor^k
  RatFunc r = *this;
  r.alignWith(d);
  SpacePoly rest = d.num_;
  std::vector<int> extra(r.den_.size(), 0);
  if (r.facs_) {
    for (size_t k = 0; k < r.facs_->size(); ++k) {
      SpacePoly q;
      while (rest.tryDivide(r.facs_->factor(k), q)) {
        rest = q;
        ++extra[k];
      }
    }
  }
  if (!rest.isConstant())
    throw DenominatorNotDeclared(
        "divisor is not a declared denominator factor product");
  r.num_ = r.num_ * rest.constantTerm().inverse();
  for (size_t k = 0; k < extra.size(); ++k)
    r.den_[k] += extra[k] - (k < d.den_.size() ? d.den_[k] : 0);
  r.reduce();
  return r;
}

RatFunc RatFunc::shiftFactor(size_t k, int pow) const {
  RatFunc r = *this;
  if (!r.facs_ || k >= r.facs_->size())
    throw DenominatorNotDeclared("factor index outside declared set");
  r.den_[k] += pow;
  r.reduce();
  return r;
}

RatFunc RatFunc::diff(int var) const {
  // d/dx (n * F^-p) = n' F^-p - p n F' F^-(p+1), accumulated per factor.
  RatFunc r(num_.diff(var), den_, facs_);
  for (size_t k = 0; k < den_.size(); ++k) {
    if (den_[k] == 0) continue;
    std::vector<int> dp = den_;
    dp[k] += 1;
    RatFunc term(num_ * facs_->factor(k).diff(var) * Scalar(-den_[k]), dp,
                 facs_);
    r = r + term;
  }
  return r;
}

bool operator==(const RatFunc& a, const RatFunc& b) {
  // cross-multiplication: a.num * b.den == b.num * a.den
  SpacePoly left = a.num_, right = b.num_;
  size_t nf = std::max(a.den_.size(), b.den_.size());
  for (size_t k = 0; k < nf; ++k) {
    int pa = k < a.den_.size() ? a.den_[k] : 0;
    int pb = k < b.den_.size() ? b.den_[k] : 0;
    const FactorSet* fs = a.facs_ ? a.facs_.get() : b.facs_.get();
    for (int j = 0; j < pb; ++j) left = left * fs->factor(k);
    for (int j = 0; j < pa; ++j) right = right * fs->factor(k);
  }
  return left == right;
}

SpacePoly DenProfile::clear(const RatFunc& r) const {
  SpacePoly n = r.num();
  for (size_t k = 0; k < pow.size(); ++k) {
    int extra = pow[k] - (k < r.denPowers().size() ? r.denPowers()[k] : 0);
    for (int j = 0; j < extra; ++j)
      n = n * r.factorSet()->factor(k);
  }
  return n;
}

}  // namespace kinetic
