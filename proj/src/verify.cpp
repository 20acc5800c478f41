#include "kinetic/verify.hpp"

#include "kinetic/errors.hpp"
#include "kinetic/prng.hpp"

namespace kinetic {

namespace {

constexpr double kDenGuard = 1e-8;

DDC scalarToDDC(const Scalar& s) {
  // split numerator/denominator through double-double division to keep the
  // full 2x53-bit precision of the rational
  auto part = [](const mpq_class& q) {
    DD num(q.get_num().get_d());
    // refine: get_d truncates to 53 bits; recover a correction term
    mpz_class err = q.get_num() - mpz_class(num.hi);
    num.lo = err.get_d();
    DD den(q.get_den().get_d());
    mpz_class derr = q.get_den() - mpz_class(den.hi);
    den.lo = derr.get_d();
    return num / den;
  };
  return {part(s.re()), part(s.im())};
}

DDC evalPoly(const SpacePoly& p, const std::vector<DDC>& pt) {
  DDC acc(0.0);
  for (const auto& [m, c] : p.terms()) {
    DDC term = scalarToDDC(c);
    for (int k = 0; k < p.dim(); ++k)
      for (int j = 0; j < m.e[k]; ++j) term = term * pt[k];
    acc = acc + term;
  }
  return acc;
}

DDC evalRat(const RatFunc& r, const std::vector<DDC>& pt) {
  DDC n = evalPoly(r.num(), pt);
  for (size_t k = 0; k < r.denPowers().size(); ++k) {
    int p = r.denPowers()[k];
    if (p == 0) continue;
    DDC f = evalPoly(r.factorSet()->factor(k), pt);
    if (f.absDouble() < kDenGuard)
      throw SingularityHit("denominator factor within guard band");
    for (int j = 0; j < p; ++j) n = n / f;
  }
  return n;
}

struct Rhs {
  const DynamicalSystem& sys;
  int dim;

  // state = (q, qdot); returns (qdot, omega)
  std::vector<DDC> operator()(const std::vector<DDC>& state) const {
    std::vector<DDC> q(state.begin(), state.begin() + dim);
    std::vector<DDC> out(2 * dim, DDC(0.0));
    for (int a = 0; a < dim; ++a) out[a] = state[dim + a];
    for (int a = 0; a < dim; ++a) {
      DDC acc = -evalPoly(sys.Q[a], q);
      for (int b = 0; b < dim; ++b) {
        acc = acc + evalPoly(sys.A[a][b], q) * state[dim + b];
        for (int c = 0; c < dim; ++c) {
          const RatFunc& gamma = sys.geometry.christoffel[a][b][c];
          if (gamma.isZero()) continue;
          acc = acc - evalRat(gamma, q) * state[dim + b] * state[dim + c];
        }
      }
      out[dim + a] = acc;
    }
    return out;
  }
};

}  // namespace

CertifyResult certify_exact(const QFI& I, const DynamicalSystem& sys) {
  VelocityExpr expr = I.toVelocityExpr();
  VelocityExpr d = total_derivative(expr, sys);
  CertifyResult res;
  res.residual = d;
  res.certified = d.isZero();
  return res;
}

Trajectory integrate(const DynamicalSystem& sys, const std::vector<Scalar>& q0,
                     const std::vector<Scalar>& v0, double tEnd, double step) {
  if (step <= 0) throw Error("integrator step must be positive");
  const int dim = sys.geometry.dim;
  Rhs rhs{sys, dim};

  std::vector<DDC> y(2 * dim);
  for (int a = 0; a < dim; ++a) {
    y[a] = scalarToDDC(q0[a]);
    y[dim + a] = scalarToDDC(v0[a]);
  }

  Trajectory traj;
  traj.step = step;
  traj.tEnd = tEnd;
  const long n = std::lround(tEnd / step);
  traj.states.reserve(n + 1);
  traj.states.push_back(y);

  DD h(step);
  DD half = DD(step) / DD(2.0);
  DD sixth = DD(step) / DD(6.0);
  for (long k = 0; k < n; ++k) {
    auto k1 = rhs(y);
    std::vector<DDC> tmp(2 * dim);
    for (int j = 0; j < 2 * dim; ++j) tmp[j] = y[j] + DDC(half, DD(0)) * k1[j];
    auto k2 = rhs(tmp);
    for (int j = 0; j < 2 * dim; ++j) tmp[j] = y[j] + DDC(half, DD(0)) * k2[j];
    auto k3 = rhs(tmp);
    for (int j = 0; j < 2 * dim; ++j) tmp[j] = y[j] + DDC(h, DD(0)) * k3[j];
    auto k4 = rhs(tmp);
    for (int j = 0; j < 2 * dim; ++j)
      y[j] = y[j] + DDC(sixth, DD(0)) *
                        (k1[j] + DDC(2.0) * k2[j] + DDC(2.0) * k3[j] + k4[j]);
    traj.states.push_back(y);
  }
  return traj;
}

DriftReport drift(const QFI& I, const DynamicalSystem& sys,
                  const std::vector<Scalar>& q0, const std::vector<Scalar>& v0,
                  double tEnd, double step) {
  const int dim = sys.geometry.dim;
  Trajectory traj = integrate(sys, q0, v0, tEnd, step);
  VelocityExpr expr = I.toVelocityExpr();

  // distinct exponential rates; each profile value is advanced by one
  // high-precision factor e^{lambda h} per step to avoid a dd transcendental
  std::vector<Scalar> lambdas;
  for (const auto& [p, cm] : expr.buckets()) {
    bool seen = false;
    for (const auto& l : lambdas) seen = seen || l == p.lambda;
    if (!seen) lambdas.push_back(p.lambda);
  }
  std::vector<DDC> stepFactor, profile;
  for (const auto& l : lambdas) {
    DDC lh = scalarToDDC(l) * DDC(DD(step), DD(0));
    stepFactor.push_back(DDC::expSmall(lh));
    profile.push_back(DDC(1.0));
  }

  DriftReport rep;
  rep.step = step;
  rep.tEnd = tEnd;
  rep.samples = static_cast<int>(traj.states.size());

  DD t(0.0);
  DDC i0(0.0);
  double worst = 0;
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const auto& st = traj.states[k];
    std::vector<DDC> q(st.begin(), st.begin() + dim);
    DDC acc(0.0);
    for (const auto& [p, cm] : expr.buckets()) {
      DDC prof(1.0);
      for (size_t li = 0; li < lambdas.size(); ++li)
        if (lambdas[li] == p.lambda) prof = profile[li];
      for (int j = 0; j < p.tpow; ++j) prof = prof * DDC(t, DD(0));
      DDC bucket(0.0);
      for (const auto& [vm, c] : cm) {
        DDC term = evalRat(c, q);
        for (int a = 0; a < dim; ++a)
          for (int j = 0; j < vm.e[a]; ++j) term = term * st[dim + a];
        bucket = bucket + term;
      }
      acc = acc + prof * bucket;
    }
    if (k == 0) {
      i0 = acc;
      rep.initial = acc.toComplexDouble();
    } else {
      DDC diff = acc - i0;
      worst = std::max(worst, diff.absDouble());
    }
    t = t + DD(step);
    for (size_t li = 0; li < lambdas.size(); ++li)
      profile[li] = profile[li] * stepFactor[li];
  }
  rep.drift = worst / std::max(1.0, std::abs(rep.initial));
  return rep;
}

std::vector<std::pair<std::vector<Scalar>, std::vector<Scalar>>>
default_battery(const DynamicalSystem& sys, uint64_t seed, int count,
                double tEnd, double probeStep) {
  const int dim = sys.geometry.dim;
  SplitMix64 rng(seed);
  auto draw = [&]() {
    std::vector<Scalar> v;
    for (int k = 0; k < dim; ++k)
      v.push_back(Scalar::rational(rng.range(-32, 32), 16));
    return v;
  };

  std::vector<std::pair<std::vector<Scalar>, std::vector<Scalar>>> out;
  int guardTrips = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++guardTrips > 200)
      throw SingularityHit("battery could not find non-singular trajectories");
    auto q0 = draw();
    auto v0 = draw();
    // reject initial points on (or near) a declared denominator zero
    bool bad = false;
    std::vector<DDC> pt;
    for (const auto& s : q0) pt.push_back(scalarToDDC(s));
    if (sys.geometry.factors) {
      for (size_t f = 0; f < sys.geometry.factors->size(); ++f)
        if (evalPoly(sys.geometry.factors->factor(f), pt).absDouble() <
            1e-2)
          bad = true;
    }
    if (bad) continue;
    // cheap probe integration; redraw if the path hits the guard band
    try {
      integrate(sys, q0, v0, tEnd, probeStep);
    } catch (const SingularityHit&) {
      continue;
    }
    out.emplace_back(std::move(q0), std::move(v0));
  }
  return out;
}

}  // namespace kinetic
