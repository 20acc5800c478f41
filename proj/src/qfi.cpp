#include "kinetic/qfi.hpp"

#include <algorithm>
#include <set>

#include "kinetic/errors.hpp"
#include "kinetic/verify.hpp"

namespace kinetic {

namespace {

// ---- linear forms over the ansatz unknowns with RatFunc coefficients ------

struct LinRat {
  std::map<int, RatFunc> c;

  void add(int u, const RatFunc& r) {
    if (r.isZero()) return;
    auto [it, inserted] = c.try_emplace(u, r);
    if (!inserted) {
      it->second += r;
      if (it->second.isZero()) c.erase(it);
    }
  }
  LinRat& operator+=(const LinRat& o) {
    for (const auto& [u, r] : o.c) add(u, r);
    return *this;
  }
  friend LinRat operator+(LinRat a, const LinRat& b) { return a += b; }
  friend LinRat operator-(LinRat a, const LinRat& b) {
    for (const auto& [u, r] : b.c) a.add(u, -r);
    return a;
  }
  LinRat scaled(const Scalar& s) const {
    LinRat r;
    if (s.isZero()) return r;
    for (const auto& [u, f] : c) r.c.emplace(u, f * s);
    return r;
  }
  LinRat times(const RatFunc& f) const {
    LinRat r;
    if (f.isZero()) return r;
    for (const auto& [u, g] : c) {
      RatFunc prod = g * f;
      if (!prod.isZero()) r.c.emplace(u, prod);
    }
    return r;
  }
  LinRat diff(int var) const {
    LinRat r;
    for (const auto& [u, f] : c) {
      RatFunc d = f.diff(var);
      if (!d.isZero()) r.c.emplace(u, d);
    }
    return r;
  }
  RatFunc instantiate(const std::vector<Scalar>& values, int dim,
                      const FactorSetPtr& facs) const {
    RatFunc acc(SpacePoly(dim), facs);
    for (const auto& [u, f] : c)
      if (!values[u].isZero()) acc += f * values[u];
    return acc;
  }
  bool allPolynomial() const {
    for (const auto& [u, f] : c)
      if (!f.isPolynomial()) return false;
    return true;
  }
};

using LinVec = std::vector<LinRat>;
using LinMat = std::vector<std::vector<LinRat>>;

struct ChainContext {
  const DynamicalSystem* sys;
  int dim;
  FactorSetPtr facs;

  LinRat zero() const { return LinRat{}; }
  LinVec zeroVec() const { return LinVec(dim); }
  LinMat zeroMat() const { return LinMat(dim, LinVec(dim)); }

  LinMat symCov(const LinVec& L) const {
    const Geometry& g = sys->geometry;
    LinMat out = zeroMat();
    Scalar half = Scalar::rational(1, 2);
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b) {
        LinRat r = (L[a].diff(b) + L[b].diff(a)).scaled(half);
        for (int c = 0; c < dim; ++c)
          r = r - L[c].times(g.christoffel[c][a][b]);
        out[a][b] = r;
        out[b][a] = out[a][b];
      }
    return out;
  }

  // 2 C_{c(a} A^c_{b)} = sum_c C_ca A^c_b + C_cb A^c_a
  LinMat aEnd(const LinMat& C) const {
    LinMat out = zeroMat();
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b) {
        LinRat r;
        for (int c = 0; c < dim; ++c) {
          r += C[c][a].times(RatFunc(sys->A[c][b], facs));
          r += C[c][b].times(RatFunc(sys->A[c][a], facs));
        }
        out[a][b] = r;
        out[b][a] = out[a][b];
      }
    return out;
  }

  LinVec contractCQ(const LinMat& C) const {
    LinVec out = zeroVec();
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        out[a] += C[a][b].times(RatFunc(sys->Q[b], facs));
    return out;
  }

  LinVec contractLA(const LinVec& L) const {
    LinVec out = zeroVec();
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        out[a] += L[b].times(RatFunc(sys->A[b][a], facs));
    return out;
  }

  LinRat contractLQ(const LinVec& L) const {
    LinRat out;
    for (int b = 0; b < dim; ++b)
      out += L[b].times(RatFunc(sys->Q[b], facs));
    return out;
  }
};

// scatter one identity sum_u coeff_u(q) u = 0 into per-monomial rows
void scatterIdentity(SparseMatrix& m, const std::map<int, RatFunc>& coeffs,
                     bool skipConstantRow = false) {
  DenProfile prof;
  for (const auto& [u, f] : coeffs) prof.absorb(f);
  std::map<Expo, SparseMatrix::Row, GrlexGreater> rows;
  for (const auto& [u, f] : coeffs) {
    SpacePoly p = prof.clear(f);
    for (const auto& [mono, c] : p.terms()) rows[mono].emplace_back(u, c);
  }
  for (auto& [mono, row] : rows) {
    if (skipConstantRow && mono.total() == 0) continue;
    m.addRow(std::move(row));
  }
}

// lambda-graded identity P0 + lambda P1 + lambda^2 P2 = 0 -> UniPoly rows
void scatterLambdaIdentity(SparseUniMatrix& m, const LinRat& p0,
                           const LinRat& p1, const LinRat& p2) {
  DenProfile prof;
  for (const auto* part : {&p0, &p1, &p2})
    for (const auto& [u, f] : part->c) prof.absorb(f);
  std::map<Expo, std::map<int, std::array<Scalar, 3>>, GrlexGreater> rows;
  int grade = 0;
  for (const auto* part : {&p0, &p1, &p2}) {
    for (const auto& [u, f] : part->c) {
      SpacePoly p = prof.clear(f);
      for (const auto& [mono, c] : p.terms()) rows[mono][u][grade] += c;
    }
    ++grade;
  }
  for (const auto& [mono, cols] : rows) {
    SparseUniMatrix::Row row;
    for (const auto& [u, grades] : cols)
      row.emplace_back(u, UniPoly({grades[0], grades[1], grades[2]}));
    m.addRow(std::move(row));
  }
}

struct Integral1System {
  ChainContext ctx;
  KTFamily family;
  std::vector<SpacePoly> lPolys;  // ansatz for L_(0)a per component
  std::vector<SpacePoly> gPolys;  // ansatz for G (no constant)
  size_t nKT = 0, nL = 0, nG = 0;
  LinMat C0;
  LinVec L0;
  LinRat G;
  std::vector<LinMat> C;  // C[0..n+1]
  std::vector<LinVec> L;  // L[0..n+1]
};

std::vector<SpacePoly> monomialAnsatz(const Geometry& g, int degree,
                                      bool dropConstant) {
  std::vector<SpacePoly> out;
  std::function<void(Expo&, int, int)> rec = [&](Expo& cur, int var, int rem) {
    if (var == g.dim) {
      if (!(dropConstant && cur.total() == 0))
        out.push_back(SpacePoly::monomial(g.dim, cur, Scalar(1)));
      return;
    }
    for (int k = 0; k <= rem; ++k) {
      cur.e[var] = static_cast<uint8_t>(k);
      rec(cur, var + 1, rem - k);
    }
    cur.e[var] = 0;
  };
  Expo cur;
  rec(cur, 0, degree);
  return out;
}

Integral1System buildChain(const DynamicalSystem& sys, int n,
                           const SearchAnsatz& ansatz) {
  if (ansatz.lDegree > 8 || ansatz.gDegree > 8 || ansatz.ktDegree > 8)
    throw DegreeOverflow("search ansatz degree above 8");
  Integral1System s;
  s.ctx = ChainContext{&sys, sys.geometry.dim, sys.geometry.factors};
  s.family = ansatz.family ? *ansatz.family
                           : solve_kt(sys.geometry, ansatz.ktDegree);
  s.lPolys = monomialAnsatz(sys.geometry, ansatz.lDegree, false);
  s.gPolys = monomialAnsatz(sys.geometry, ansatz.gDegree, true);
  s.nKT = s.family.size();
  s.nL = s.lPolys.size() * static_cast<size_t>(s.ctx.dim);
  s.nG = s.gPolys.size();
  if (s.nKT + s.nL + s.nG == 0) throw EmptyAnsatz("integral-1 ansatz is empty");

  const int dim = s.ctx.dim;
  // unknown layout: [KT coeffs][L0 coeffs][G coeffs]
  s.C0 = s.ctx.zeroMat();
  for (size_t k = 0; k < s.nKT; ++k)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        s.C0[a][b].add(static_cast<int>(k),
                       RatFunc(s.family.basis[k][a][b], s.ctx.facs));
  s.L0 = s.ctx.zeroVec();
  for (int a = 0; a < dim; ++a)
    for (size_t q = 0; q < s.lPolys.size(); ++q)
      s.L0[a].add(static_cast<int>(s.nKT + a * s.lPolys.size() + q),
                  RatFunc(s.lPolys[q], s.ctx.facs));
  for (size_t q = 0; q < s.gPolys.size(); ++q)
    s.G.add(static_cast<int>(s.nKT + s.nL + q),
            RatFunc(s.gPolys[q], s.ctx.facs));

  // the chain: C[k], L[k] for k = 0..n+1 with the terminal members being the
  // constraint candidates C_{n+1} = 0 and L_{n+1} = 0
  s.C.assign(n + 2, s.ctx.zeroMat());
  s.L.assign(n + 2, s.ctx.zeroVec());
  s.C[0] = s.C0;
  s.L[0] = s.L0;
  // L1 = 2 C0 Q - L0 A - grad G
  {
    LinVec l1 = s.ctx.contractCQ(s.C0);
    LinVec la = s.ctx.contractLA(s.L0);
    for (int a = 0; a < dim; ++a)
      s.L[1][a] = l1[a].scaled(Scalar(2)) - la[a] - s.G.diff(a);
  }
  // C1 = -symCov(L0) - aEnd(C0)
  {
    LinMat sc = s.ctx.symCov(s.L0);
    LinMat ae = s.ctx.aEnd(s.C0);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        s.C[1][a][b] = s.ctx.zero() - sc[a][b] - ae[a][b];
  }
  for (int k = 1; k <= n; ++k) {
    // C_{k+1} = -symCov(L_k) - (1/k) aEnd(C_k)
    LinMat sc = s.ctx.symCov(s.L[k]);
    LinMat ae = s.ctx.aEnd(s.C[k]);
    Scalar invk = Scalar(1) / Scalar(k);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        s.C[k + 1][a][b] = s.ctx.zero() - sc[a][b] - ae[a][b].scaled(invk);
    // L_{k+1} = [2 C_k Q - k L_k A - grad(L_{k-1} Q)] / (k(k+1))
    LinVec cq = s.ctx.contractCQ(s.C[k]);
    LinVec la = s.ctx.contractLA(s.L[k]);
    LinRat lq = s.ctx.contractLQ(s.L[k - 1]);
    Scalar inv = Scalar(1) / Scalar(static_cast<long>(k) * (k + 1));
    for (int a = 0; a < dim; ++a)
      s.L[k + 1][a] =
          (cq[a].scaled(Scalar(2)) - la[a].scaled(Scalar(k)) - lq.diff(a))
              .scaled(inv);
  }
  return s;
}

// KT constraint rows for a linear-form symmetric matrix
void scatterKTConstraint(SparseMatrix& m, const LinMat& C,
                         const ChainContext& ctx) {
  const Geometry& g = ctx.sys->geometry;
  const int n = ctx.dim;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int c = b; c < n; ++c) {
        const std::array<std::array<int, 3>, 3> rot = {
            {{a, b, c}, {a, c, b}, {b, c, a}}};
        LinRat acc;
        for (const auto& [aa, bb, cc] : rot) {
          acc += C[aa][bb].diff(cc);
          for (int d = 0; d < n; ++d) {
            acc = acc - C[d][bb].times(g.christoffel[d][cc][aa]);
            acc = acc - C[aa][d].times(g.christoffel[d][cc][bb]);
          }
        }
        scatterIdentity(m, acc.c);
      }
}

QFI instantiateIntegral1(const Integral1System& s, int n,
                         const std::vector<Scalar>& v) {
  const int dim = s.ctx.dim;
  const FactorSetPtr& facs = s.ctx.facs;
  QFI out;
  out.dim = dim;
  out.origin = QFI::Origin::Integral1;
  out.chainLength = n;

  auto matAt = [&](const LinMat& M) {
    RatMatrix r(dim, RatVector(dim, RatFunc(SpacePoly(dim), facs)));
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        r[a][b] = M[a][b].instantiate(v, dim, facs);
    return r;
  };
  auto vecAt = [&](const LinVec& L) {
    RatVector r(dim, RatFunc(SpacePoly(dim), facs));
    for (int a = 0; a < dim; ++a) r[a] = L[a].instantiate(v, dim, facs);
    return r;
  };

  std::vector<RatMatrix> Cv;
  std::vector<RatVector> Lv;
  for (int k = 0; k <= n; ++k) {
    Cv.push_back(matAt(s.C[k]));
    Lv.push_back(vecAt(s.L[k]));
  }
  // K contributions: t^{M+1}/(M+1) L_M Q and G at t^0
  std::vector<RatFunc> LQ;
  for (int k = 0; k <= n; ++k) {
    RatFunc lq(SpacePoly(dim), facs);
    for (int b = 0; b < dim; ++b)
      lq += Lv[k][b] * RatFunc(s.ctx.sys->Q[b], facs);
    LQ.push_back(lq);
  }
  out.s = LQ[n].isPolynomial() ? LQ[n].num().constantTerm() : Scalar(0);

  for (int N = 0; N <= n + 1; ++N) {
    QFITerm term;
    term.profile = Profile{Scalar(0), N};
    term.Kab.assign(dim, RatVector(dim, RatFunc(SpacePoly(dim), facs)));
    term.Ka.assign(dim, RatFunc(SpacePoly(dim), facs));
    term.K = RatFunc(SpacePoly(dim), facs);
    if (N == 0) {
      term.Kab = Cv[0];
      term.Ka = Lv[0];
      term.K = s.G.instantiate(v, dim, facs);
    } else {
      Scalar invN = Scalar(1) / Scalar(N);
      if (N <= n) {
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b) term.Kab[a][b] = Cv[N][a][b] * invN;
        term.Ka = Lv[N];
      }
      term.K = LQ[N - 1] * invN;
    }
    bool empty = term.K.isZero();
    for (int a = 0; a < dim && empty; ++a) {
      if (!term.Ka[a].isZero()) empty = false;
      for (int b = 0; b < dim && empty; ++b)
        if (!term.Kab[a][b].isZero()) empty = false;
    }
    if (!empty) out.terms.push_back(std::move(term));
  }
  return out;
}

// Integral-2 condition matrix M(lambda) over unknowns [KT coeffs][L coeffs].
struct Integral2System {
  ChainContext ctx;
  KTFamily family;
  std::vector<SpacePoly> lPolys;
  size_t nKT = 0, nL = 0;
  SparseUniMatrix matrix{0};
  LinMat C;
  LinVec L;
};

Integral2System buildIntegral2(const DynamicalSystem& sys,
                               const SearchAnsatz& ansatz) {
  Integral2System s{ChainContext{&sys, sys.geometry.dim, sys.geometry.factors},
                    ansatz.family ? *ansatz.family
                                  : solve_kt(sys.geometry, ansatz.ktDegree),
                    monomialAnsatz(sys.geometry, ansatz.lDegree, false)};
  const int dim = s.ctx.dim;
  s.nKT = s.family.size();
  s.nL = s.lPolys.size() * static_cast<size_t>(dim);
  if (s.nKT + s.nL == 0) throw EmptyAnsatz("integral-2 ansatz is empty");

  s.C = s.ctx.zeroMat();
  for (size_t k = 0; k < s.nKT; ++k)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        s.C[a][b].add(static_cast<int>(k),
                      RatFunc(s.family.basis[k][a][b], s.ctx.facs));
  s.L = s.ctx.zeroVec();
  for (int a = 0; a < dim; ++a)
    for (size_t q = 0; q < s.lPolys.size(); ++q)
      s.L[a].add(static_cast<int>(s.nKT + a * s.lPolys.size() + q),
                 RatFunc(s.lPolys[q], s.ctx.facs));

  SparseUniMatrix m(static_cast<int>(s.nKT + s.nL));
  // eq1: lambda C_ab + L_(a;b) + 2 C_{c(a} A^c_{b)} = 0
  LinMat sc = s.ctx.symCov(s.L);
  LinMat ae = s.ctx.aEnd(s.C);
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b)
      scatterLambdaIdentity(m, sc[a][b] + ae[a][b], s.C[a][b], LinRat{});
  // eq2: grad(L Q)_a - 2 lambda (C Q)_a + lambda^2 L_a + lambda (L A)_a = 0
  LinRat lq = s.ctx.contractLQ(s.L);
  LinVec cq = s.ctx.contractCQ(s.C);
  LinVec la = s.ctx.contractLA(s.L);
  for (int a = 0; a < dim; ++a)
    scatterLambdaIdentity(m, lq.diff(a), la[a] - cq[a].scaled(Scalar(2)),
                          s.L[a]);
  s.matrix = std::move(m);
  return s;
}

QFI instantiateIntegral2(const Integral2System& s, const Scalar& lambda,
                         const std::vector<Scalar>& v) {
  const int dim = s.ctx.dim;
  const FactorSetPtr& facs = s.ctx.facs;
  QFI out;
  out.dim = dim;
  out.origin = QFI::Origin::Integral2;
  out.lambda = lambda;
  QFITerm term;
  term.profile = Profile{lambda, 0};
  term.Kab.assign(dim, RatVector(dim, RatFunc(SpacePoly(dim), facs)));
  term.Ka.assign(dim, RatFunc(SpacePoly(dim), facs));
  term.K = RatFunc(SpacePoly(dim), facs);
  for (int a = 0; a < dim; ++a) {
    RatFunc La = s.L[a].instantiate(v, dim, facs);
    term.Ka[a] = La * lambda;
    term.K += La * RatFunc(s.ctx.sys->Q[a], facs);
    for (int b = 0; b < dim; ++b)
      term.Kab[a][b] = s.C[a][b].instantiate(v, dim, facs) * lambda;
  }
  out.terms.push_back(std::move(term));
  return out;
}

void certifyOrThrow(const QFI& q, const DynamicalSystem& sys) {
  auto check = certify_exact(q, sys);
  if (!check.certified)
    throw Error("internal: solver emitted a non-conserved candidate");
}

}  // namespace

// ---------------------------------------------------------------------------

VelocityExpr QFI::toVelocityExpr() const {
  VelocityExpr e(dim);
  for (const auto& term : terms) {
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        if (term.Kab[a][b].isZero()) continue;
        e.add(term.profile, Expo::unit(a).plus(Expo::unit(b)),
              term.Kab[a][b]);
      }
      if (!term.Ka[a].isZero()) e.add(term.profile, Expo::unit(a), term.Ka[a]);
    }
    if (!term.K.isZero()) e.add(term.profile, Expo{}, term.K);
  }
  e.prune();
  return e;
}

QFI QFI::fromVelocityExpr(const VelocityExpr& e, int dim, FactorSetPtr facs) {
  QFI out;
  out.dim = dim;
  out.origin = Origin::External;
  for (const auto& [prof, cm] : e.buckets()) {
    QFITerm term;
    term.profile = prof;
    term.Kab.assign(dim, RatVector(dim, RatFunc(SpacePoly(dim), facs)));
    term.Ka.assign(dim, RatFunc(SpacePoly(dim), facs));
    term.K = RatFunc(SpacePoly(dim), facs);
    for (const auto& [vm, c] : cm) {
      int total = vm.total();
      if (total == 0) {
        term.K += c;
      } else if (total == 1) {
        for (int a = 0; a < dim; ++a)
          if (vm.e[a] == 1) term.Ka[a] += c;
      } else if (total == 2) {
        int first = -1, second = -1;
        for (int a = 0; a < dim; ++a) {
          if (vm.e[a] == 2) first = second = a;
          if (vm.e[a] == 1) (first < 0 ? first : second) = a;
        }
        if (first == second) {
          term.Kab[first][first] += c;
        } else {
          Scalar half = Scalar::rational(1, 2);
          term.Kab[first][second] += c * half;
          term.Kab[second][first] += c * half;
        }
      } else {
        throw DegreeOverflow("first integral has velocity degree above 2");
      }
    }
    out.terms.push_back(std::move(term));
  }
  return out;
}

bool QFI::isZero() const {
  return toVelocityExpr().isZero();
}

SolutionSpace find_integral1(const DynamicalSystem& sys, int n,
                             const SearchAnsatz& ansatz) {
  if (n < 0) throw Error("chain length must be nonnegative");
  Integral1System s = buildChain(sys, n, ansatz);
  const size_t nu = s.nKT + s.nL + s.nG;

  SparseMatrix m(static_cast<int>(nu));
  // each computed C_k, k = 1..n, must be a Killing tensor
  for (int k = 1; k <= n; ++k) scatterKTConstraint(m, s.C[k], s.ctx);
  // terminal conditions: C_{n+1} = 0, L_{n+1} = 0
  for (int a = 0; a < s.ctx.dim; ++a) {
    for (int b = a; b < s.ctx.dim; ++b)
      scatterIdentity(m, s.C[n + 1][a][b].c);
    scatterIdentity(m, s.L[n + 1][a].c);
  }
  // L_n Q = s: every non-constant coefficient vanishes
  LinRat lnq = s.ctx.contractLQ(s.L[n]);
  scatterIdentity(m, lnq.c, lnq.allPolynomial());

  SolutionSpace out;
  out.chainLength = n;
  out.unknowns = nu;
  out.constraintRows = m.rowCount();
  for (const auto& v : nullspace(m)) {
    QFI q = instantiateIntegral1(s, n, v);
    if (q.isZero()) continue;
    certifyOrThrow(q, sys);
    out.basis.push_back(std::move(q));
  }
  out.basis = prune_to_basis(out.basis);
  return out;
}

SolutionSpace find_integral1_auto(const DynamicalSystem& sys,
                                  const SearchAnsatz& ansatz, int startN,
                                  int cap) {
  SolutionSpace best = find_integral1(sys, startN, ansatz);
  int stable = 0;
  for (int n = startN + 1; n <= cap && stable < 2; ++n) {
    SolutionSpace next = find_integral1(sys, n, ansatz);
    if (next.basis.size() == best.basis.size())
      ++stable;
    else
      stable = 0;
    best = std::move(next);
  }
  return best;
}

SolutionSpace find_integral2(const DynamicalSystem& sys, const Scalar& lambda,
                             const SearchAnsatz& ansatz) {
  if (lambda.isZero()) throw LambdaZero("integral-2 requires lambda != 0");
  Integral2System s = buildIntegral2(sys, ansatz);
  SparseMatrix m = s.matrix.evalAt(lambda);
  SolutionSpace out;
  out.lambda = lambda;
  out.unknowns = s.nKT + s.nL;
  out.constraintRows = m.rowCount();
  for (const auto& v : nullspace(m)) {
    QFI q = instantiateIntegral2(s, lambda, v);
    if (q.isZero()) continue;
    certifyOrThrow(q, sys);
    out.basis.push_back(std::move(q));
  }
  out.basis = prune_to_basis(out.basis);
  return out;
}

LambdaScanResult lambda_scan(const DynamicalSystem& sys,
                             const SearchAnsatz& ansatz, ScanMode mode,
                             const std::vector<Scalar>& candidates,
                             uint64_t seed) {
  Integral2System s = buildIntegral2(sys, ansatz);
  const int cols = static_cast<int>(s.nKT + s.nL);

  LambdaScanResult res;
  res.unknownCount = cols;

  // generic rank: maximum over a few scattered rational sample points
  SplitMix64 rng(seed);
  auto randomLambda = [&]() {
    return Scalar(mpq_class(rng.range(7, 9999), rng.range(2, 97)),
                  mpq_class(rng.range(1, 97), rng.range(3, 89)));
  };
  for (int k = 0; k < 3; ++k)
    res.genericRank = std::max(res.genericRank,
                               s.matrix.rankAt(randomLambda()));

  auto confirmed = [&](const Scalar& lam) {
    return !lam.isZero() && s.matrix.rankAt(lam) < res.genericRank;
  };

  if (mode == ScanMode::ExactCandidates) {
    std::vector<Scalar> cand = candidates;
    if (cand.empty()) {
      // heuristic: small multiples of half the constant A-entries
      std::set<Scalar> seen;
      for (const auto& row : sys.A)
        for (const auto& e : row) {
          if (e.isZero() || !e.isConstant()) continue;
          Scalar half = e.constantTerm() * Scalar::rational(1, 2);
          for (long j = 1; j <= 8; ++j) {
            for (const Scalar& c : {half * Scalar(j), half * Scalar(-j)})
              if (!c.isZero() && seen.insert(c).second) cand.push_back(c);
          }
        }
      // a free system has no A-entries to suggest anything
    }
    for (const Scalar& lam : cand)
      if (confirmed(lam)) res.exact.push_back(lam);
    return res;
  }

  if (mode == ScanMode::FloatSweep) {
    // numeric rank on a real grid; candidates only, nothing exact here
    const double span = 8.0, step = 0.25;
    for (double x = -span; x <= span + 1e-9; x += step) {
      if (std::abs(x) < 1e-12) continue;
      auto approxRank = [&]() {
        // double-precision echelon on the evaluated matrix
        std::vector<std::vector<std::complex<double>>> rows;
        for (const auto& row : s.matrix.rows()) {
          std::vector<std::complex<double>> r(cols, 0.0);
          for (const auto& [c, p] : row) {
            std::complex<double> acc = 0;
            for (int k = p.degree(); k >= 0; --k)
              acc = acc * x + p.coeff(k).toComplexDouble();
            r[c] = acc;
          }
          rows.push_back(std::move(r));
        }
        int rank = 0;
        for (int c = 0; c < cols; ++c) {
          size_t best = rows.size();
          double mag = 1e-9;
          for (size_t r = rank; r < rows.size(); ++r)
            if (std::abs(rows[r][c]) > mag) {
              mag = std::abs(rows[r][c]);
              best = r;
            }
          if (best == rows.size()) continue;
          std::swap(rows[rank], rows[best]);
          for (size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(r) == rank) continue;
            std::complex<double> f = rows[r][c] / rows[rank][c];
            if (std::abs(f) == 0.0) continue;
            for (int cc = c; cc < cols; ++cc) rows[r][cc] -= f * rows[rank][cc];
          }
          ++rank;
        }
        return rank;
      };
      if (approxRank() < res.genericRank)
        res.floatCandidates.emplace_back(x, 0.0);
    }
    return res;
  }

  // MinorRoots: gcd of several random maximal minors, then root extraction
  if (res.genericRank == 0) return res;
  UniPoly g;
  const size_t nRows = s.matrix.rowCount();
  for (int trial = 0; trial < 4; ++trial) {
    // random row permutation changes which nonsingular minor the pivot
    // search lands on
    std::vector<int> perm(nRows);
    for (size_t k = 0; k < nRows; ++k) perm[k] = static_cast<int>(k);
    for (size_t k = nRows; k > 1; --k)
      std::swap(perm[k - 1], perm[rng.below(k)]);
    Scalar lam = randomLambda();
    SparseMatrix eval = s.matrix.evalAt(lam);
    SparseMatrix permuted(cols);
    for (size_t k = 0; k < nRows; ++k)
      permuted.addRow(eval.rows()[perm[k]]);
    PivotSelection sel = pivot_selection(permuted);
    if (sel.rank < res.genericRank) continue;  // unlucky sample point
    std::vector<int> rowIds;
    for (int r : sel.rows) rowIds.push_back(perm[r]);
    std::sort(rowIds.begin(), rowIds.end());
    UniPoly det = s.matrix.minorDet(rowIds, sel.cols);
    g = g.isZero() ? det : UniPoly::gcd(g, det);
    if (g.degree() <= 0) break;
  }
  if (g.isZero() || g.degree() <= 0) return res;

  std::set<Scalar> found;
  std::vector<std::complex<double>> leftovers;
  for (const auto& root : g.complexRoots()) {
    auto re = rationalize(root.real(), 1000000, 1e-6);
    auto im = rationalize(root.imag(), 1000000, 1e-6);
    bool exactHit = false;
    if (re && im) {
      Scalar lam(*re, *im);
      if (!g.eval(lam).isZero()) {
        exactHit = false;
      } else if (confirmed(lam)) {
        if (found.insert(lam).second) res.exact.push_back(lam);
        exactHit = true;
      } else {
        exactHit = !lam.isZero() ? false : true;  // drop lambda = 0 silently
      }
    }
    if (!exactHit && std::abs(root) > 1e-9) leftovers.push_back(root);
  }
  // deduplicate float candidates
  for (const auto& cand : leftovers) {
    bool dup = false;
    for (const auto& seen : res.floatCandidates)
      if (std::abs(seen - cand) < 1e-7) dup = true;
    for (const Scalar& lam : res.exact)
      if (std::abs(lam.toComplexDouble() - cand) < 1e-7) dup = true;
    if (!dup) res.floatCandidates.push_back(cand);
  }
  std::sort(res.exact.begin(), res.exact.end());
  return res;
}

std::pair<SolutionSpace, SolutionSpace> theorem3_split(
    const SolutionSpace& sol, const DynamicalSystem& sys) {
  if (!sys.hasZeroA())
    throw NotApplicable("theorem-3 split needs A^a_b = 0");
  const int dim = sys.geometry.dim;
  auto facs = sys.geometry.factors;

  auto part = [&](const QFI& q, int parity) {
    QFI out;
    out.dim = dim;
    out.origin = QFI::Origin::Split;
    out.chainLength = q.chainLength;
    for (const auto& term : q.terms) {
      if (!term.profile.lambda.isZero())
        throw NotApplicable("theorem-3 split applies to polynomial profiles");
      int N = term.profile.tpow;
      QFITerm t;
      t.profile = term.profile;
      t.Kab.assign(dim, RatVector(dim, RatFunc(SpacePoly(dim), facs)));
      t.Ka.assign(dim, RatFunc(SpacePoly(dim), facs));
      t.K = RatFunc(SpacePoly(dim), facs);
      bool any = false;
      if (N % 2 == parity) {  // quadratic and scalar parts carry parity of N
        t.Kab = term.Kab;
        t.K = term.K;
        for (int a = 0; a < dim && !any; ++a) {
          if (!t.K.isZero()) any = true;
          for (int b = 0; b < dim && !any; ++b)
            if (!t.Kab[a][b].isZero()) any = true;
        }
        any = any || !t.K.isZero();
      }
      if (N % 2 != parity) {  // velocity-linear part flips parity
        t.Ka = term.Ka;
        for (int a = 0; a < dim && !any; ++a)
          if (!t.Ka[a].isZero()) any = true;
      }
      if (any) out.terms.push_back(std::move(t));
    }
    return out;
  };

  SolutionSpace even, odd;
  even.chainLength = sol.chainLength;
  odd.chainLength = sol.chainLength;
  for (const QFI& q : sol.basis) {
    QFI e = part(q, 0), o = part(q, 1);
    if (!e.isZero()) {
      certifyOrThrow(e, sys);
      even.basis.push_back(std::move(e));
    }
    if (!o.isZero()) {
      certifyOrThrow(o, sys);
      odd.basis.push_back(std::move(o));
    }
  }
  even.basis = prune_to_basis(even.basis);
  odd.basis = prune_to_basis(odd.basis);
  return {std::move(even), std::move(odd)};
}

// ---- span utilities --------------------------------------------------------

namespace {

struct SigKey {
  Profile prof;
  Expo vmono;
  Expo qmono;
  friend bool operator<(const SigKey& a, const SigKey& b) {
    if (!(a.prof == b.prof)) return a.prof < b.prof;
    if (!(a.vmono == b.vmono)) return GrlexGreater{}(a.vmono, b.vmono);
    return GrlexGreater{}(a.qmono, b.qmono);
  }
};

// uniform clearing profile across the collection, then exact coefficients
std::map<SigKey, std::vector<Scalar>> signatures(const std::vector<QFI>& qs) {
  std::vector<VelocityExpr> exprs;
  DenProfile prof;
  for (const auto& q : qs) {
    exprs.push_back(q.toVelocityExpr());
    for (const auto& [p, cm] : exprs.back().buckets())
      for (const auto& [e, c] : cm) prof.absorb(c);
  }
  std::map<SigKey, std::vector<Scalar>> rows;
  for (size_t k = 0; k < exprs.size(); ++k)
    for (const auto& [p, cm] : exprs[k].buckets())
      for (const auto& [e, c] : cm) {
        SpacePoly cleared = prof.clear(c);
        for (const auto& [mono, s] : cleared.terms()) {
          auto& vec = rows[SigKey{p, e, mono}];
          vec.resize(qs.size(), Scalar(0));
          vec[k] += s;
        }
      }
  // drop the constant-integral direction (profile 1, no velocities, constant)
  rows.erase(SigKey{Profile{}, Expo{}, Expo{}});
  return rows;
}

}  // namespace

int qfi_span_rank(const std::vector<QFI>& qfis) {
  if (qfis.empty()) return 0;
  auto rows = signatures(qfis);
  SparseMatrix m(static_cast<int>(qfis.size()));
  // transpose: columns are the QFIs
  for (const auto& [key, vec] : rows) {
    SparseMatrix::Row row;
    for (size_t k = 0; k < vec.size(); ++k)
      if (!vec[k].isZero()) row.emplace_back(static_cast<int>(k), vec[k]);
    m.addRow(std::move(row));
  }
  return sparse_rank(m);
}

bool span_contains(const std::vector<QFI>& basis, const QFI& candidate) {
  std::vector<QFI> all = basis;
  all.push_back(candidate);
  auto rows = signatures(all);
  SparseMatrix aug(static_cast<int>(basis.size()) + 1);
  for (const auto& [key, vec] : rows) {
    SparseMatrix::Row row;
    for (size_t k = 0; k < basis.size(); ++k) {
      Scalar v = k < vec.size() ? vec[k] : Scalar(0);
      if (!v.isZero()) row.emplace_back(static_cast<int>(k), v);
    }
    Scalar rhs = vec.size() == all.size() ? vec.back() : Scalar(0);
    if (!rhs.isZero())
      row.emplace_back(static_cast<int>(basis.size()), rhs);
    aug.addRow(std::move(row));
  }
  return solve_affine(aug).has_value();
}

bool same_qfi_span(const std::vector<QFI>& a, const std::vector<QFI>& b) {
  std::vector<QFI> stacked = a;
  stacked.insert(stacked.end(), b.begin(), b.end());
  int ra = qfi_span_rank(a), rb = qfi_span_rank(b);
  return ra == rb && qfi_span_rank(stacked) == ra;
}

std::vector<QFI> prune_to_basis(const std::vector<QFI>& qfis) {
  std::vector<QFI> kept;
  for (const auto& q : qfis) {
    if (q.isZero()) continue;
    kept.push_back(q);
    if (qfi_span_rank(kept) < static_cast<int>(kept.size())) kept.pop_back();
  }
  return kept;
}

QFI parse_qfi(const std::string& text, const DynamicalSystem& sys) {
  ParseContext ctx;
  ctx.coords = sys.geometry.coords;
  ctx.factors = sys.geometry.factors;
  ctx.allowVelocities = true;
  ctx.allowTime = true;
  VelocityExpr e = parse_expression(text, ctx);
  return QFI::fromVelocityExpr(e, sys.geometry.dim, sys.geometry.factors);
}

}  // namespace kinetic
