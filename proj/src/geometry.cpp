#include "kinetic/geometry.hpp"

#include "kinetic/errors.hpp"

namespace kinetic {

Geometry build_geometry(const PolyMatrix& metric, const RatMatrix& inverse,
                        FactorSetPtr factors,
                        std::vector<std::string> coordNames) {
  Geometry g;
  g.dim = static_cast<int>(metric.size());
  g.coords = std::move(coordNames);
  g.factors = factors ? std::move(factors) : std::make_shared<FactorSet>();
  g.metric = metric;
  g.inverseMetric = inverse;

  const int n = g.dim;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (metric[a][b] != metric[b][a])
        throw Error("metric is not symmetric");

  // verify gamma_ab gamma^bc == delta_a^c exactly
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      RatFunc s(SpacePoly(n), g.factors);
      for (int b = 0; b < n; ++b)
        s += inverse[b][c] * metric[a][b];
      RatFunc expect =
          RatFunc::constant(n, Scalar(a == c ? 1 : 0), g.factors);
      if (!(s == expect))
        throw InverseMismatch("metric times supplied inverse is not identity");
    }
  }

  // Gamma^a_bc = 1/2 gamma^ad (gamma_db,c + gamma_dc,b - gamma_bc,d)
  g.christoffel.assign(n, RatMatrix(n, RatVector(n)));
  Scalar half = Scalar::rational(1, 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        RatFunc s(SpacePoly(n), g.factors);
        for (int d = 0; d < n; ++d) {
          SpacePoly inner = g.metric[d][b].diff(c) + g.metric[d][c].diff(b) -
                            g.metric[b][c].diff(d);
          s += g.inverseMetric[a][d] * inner;
        }
        g.christoffel[a][b][c] = s * half;
        g.christoffel[a][c][b] = g.christoffel[a][b][c];
      }
  return g;
}

RatMatrix sym_cov_deriv(const RatVector& L, const Geometry& g) {
  const int n = g.dim;
  RatMatrix out(n, RatVector(n));
  Scalar half = Scalar::rational(1, 2);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      RatFunc r = (L[a].diff(b) + L[b].diff(a)) * half;
      for (int c = 0; c < n; ++c) r -= g.christoffel[c][a][b] * L[c];
      out[a][b] = r;
      out[b][a] = out[a][b];
    }
  return out;
}

bool DynamicalSystem::isFree() const {
  for (const auto& q : Q)
    if (!q.isZero()) return false;
  return hasZeroA();
}

bool DynamicalSystem::hasZeroA() const {
  for (const auto& row : A)
    for (const auto& e : row)
      if (!e.isZero()) return false;
  return true;
}

std::vector<VelocityExpr> DynamicalSystem::covariantForces() const {
  if (!V) throw MissingPotential("system has no potential V");
  const int n = geometry.dim;
  // P^a = Q^a - gamma^ab V_,b ; F^a = -P^a + A^a_b qdot^b ; F_a = gamma_ab F^b
  RatVector Pup(n);
  for (int a = 0; a < n; ++a) {
    RatFunc s(RatFunc(Q[a], geometry.factors));
    for (int b = 0; b < n; ++b)
      s -= geometry.inverseMetric[a][b] * RatFunc(V->diff(b), geometry.factors);
    Pup[a] = s;
  }
  std::vector<VelocityExpr> F(n, VelocityExpr(n));
  for (int a = 0; a < n; ++a) {
    RatFunc f0(SpacePoly(n), geometry.factors);
    for (int b = 0; b < n; ++b) f0 -= geometry.metric[a][b] * Pup[b];
    F[a].add(Profile{}, Expo{}, f0);
    for (int b = 0; b < n; ++b) {
      RatFunc f1(SpacePoly(n), geometry.factors);
      for (int c = 0; c < n; ++c)
        f1 += geometry.metric[a][c] * RatFunc(A[c][b], geometry.factors);
      F[a].add(Profile{}, Expo::unit(b), f1);
    }
  }
  return F;
}

VelocityExpr operator*(const VelocityExpr& a, const VelocityExpr& b) {
  VelocityExpr r(std::max(a.dim(), b.dim()));
  for (const auto& [pa, cma] : a.buckets())
    for (const auto& [pb, cmb] : b.buckets()) {
      Profile p{pa.lambda + pb.lambda, pa.tpow + pb.tpow};
      for (const auto& [ea, ca] : cma)
        for (const auto& [eb, cb] : cmb) r.add(p, ea.plus(eb), ca * cb);
    }
  return r;
}

VelocityExpr total_derivative(const VelocityExpr& expr,
                              const DynamicalSystem& sys) {
  const Geometry& g = sys.geometry;
  const int n = g.dim;
  if (expr.velocityDegree() > 2)
    throw DegreeOverflow("total_derivative input has velocity degree > 2");

  VelocityExpr out(n);
  for (const auto& [prof, cm] : expr.buckets()) {
    // profile derivative: d/dt e^{lt} t^N = l e^{lt} t^N + N e^{lt} t^{N-1}
    for (const auto& [e, c] : cm) {
      if (!prof.lambda.isZero())
        out.add(prof, e, c * prof.lambda);
      if (prof.tpow > 0)
        out.add(Profile{prof.lambda, prof.tpow - 1}, e,
                c * Scalar(prof.tpow));
    }
    // spatial part: qdot^a dC/dq^a
    for (const auto& [e, c] : cm)
      for (int a = 0; a < n; ++a)
        out.add(prof, e.plus(Expo::unit(a)), c.diff(a));
    // velocity part: omega^a dE/dqdot^a with
    // omega^a = -Gamma^a_bc qd^b qd^c - Q^a + A^a_b qd^b
    for (const auto& [e, c] : cm) {
      for (int a = 0; a < n; ++a) {
        if (e.e[a] == 0) continue;
        Expo de = e;
        de.e[a] -= 1;
        RatFunc cd = c * Scalar(e.e[a]);
        out.add(prof, de, cd * RatFunc(-sys.Q[a], g.factors));
        for (int b = 0; b < n; ++b) {
          out.add(prof, de.plus(Expo::unit(b)),
                  cd * RatFunc(sys.A[a][b], g.factors));
          for (int cc = 0; cc < n; ++cc)
            out.add(prof, de.plus(Expo::unit(b)).plus(Expo::unit(cc)),
                    -(cd * g.christoffel[a][b][cc]));
        }
      }
    }
  }
  out.prune();
  return out;
}

VelocityExpr momentum_map(const VelocityExpr& expr, const Geometry& g) {
  const int n = g.dim;
  VelocityExpr out(n);
  for (const auto& [prof, cm] : expr.buckets()) {
    for (const auto& [e, c] : cm) {
      // expand prod_a (gamma^{ab} p_b)^{e_a}
      VelocityExpr term(n);
      term.add(prof, Expo{}, c);
      for (int a = 0; a < n; ++a)
        for (int j = 0; j < e.e[a]; ++j) {
          VelocityExpr sub(n);
          for (int b = 0; b < n; ++b)
            sub.add(Profile{}, Expo::unit(b), g.inverseMetric[a][b]);
          term = term * sub;
        }
      out += term;
    }
  }
  out.prune();
  return out;
}

}  // namespace kinetic
