#include "kinetic/poly.hpp"

namespace kinetic {

bool SpacePoly::tryDivide(const SpacePoly& d, SpacePoly& quotient) const {
  if (d.isZero()) return false;
  SpacePoly rem = *this;
  SpacePoly q(dim_);
  const auto& lead = *d.terms_.begin();  // graded-lex leading term
  while (!rem.isZero()) {
    const auto& rlead = *rem.terms_.begin();
    // monomial divisibility of the leading terms
    Expo qm;
    bool ok = true;
    for (int k = 0; k < kMaxVars; ++k) {
      if (rlead.first.e[k] < lead.first.e[k]) {
        ok = false;
        break;
      }
      qm.e[k] = static_cast<uint8_t>(rlead.first.e[k] - lead.first.e[k]);
    }
    if (!ok) return false;
    Scalar qc = rlead.second / lead.second;
    q.add(qm, qc);
    rem -= SpacePoly::monomial(dim_, qm, qc) * d;
  }
  quotient = std::move(q);
  return true;
}

}  // namespace kinetic
