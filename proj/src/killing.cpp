#include "kinetic/killing.hpp"
#include <functional>

#include <algorithm>

#include "kinetic/errors.hpp"
#include "kinetic/linalg.hpp"

namespace kinetic {

namespace {

std::vector<Expo> monomialsUpTo(int dim, int degree) {
  std::vector<Expo> out;
  Expo cur;
  // iterative enumeration in graded-lex-friendly order
  std::function<void(int, int)> rec = [&](int var, int rem) {
    if (var == dim) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= rem; ++k) {
      cur.e[var] = static_cast<uint8_t>(k);
      rec(var + 1, rem - k);
    }
    cur.e[var] = 0;
  };
  rec(0, degree);
  return out;
}

std::vector<SpacePoly> ansatzPolynomials(const Geometry& g,
                                         const KTAnsatz& ansatz) {
  std::vector<SpacePoly> polys;
  for (const Expo& m : monomialsUpTo(g.dim, ansatz.degree))
    polys.push_back(SpacePoly::monomial(g.dim, m, Scalar(1)));
  if (g.factors && g.factors->size() > 0 && ansatz.factorWindowMax > 0) {
    std::vector<SpacePoly> base = polys;
    for (size_t f = 0; f < g.factors->size(); ++f) {
      SpacePoly fp = SpacePoly::constant(g.dim, Scalar(1));
      for (int w = 1; w <= ansatz.factorWindowMax; ++w) {
        fp = fp * g.factors->factor(f);
        for (const SpacePoly& b : base) {
          SpacePoly cand = b * fp;
          if (std::find(polys.begin(), polys.end(), cand) == polys.end())
            polys.push_back(cand);
        }
      }
    }
  }
  return polys;
}

// symmetric component pairs (a <= b) in a fixed order
std::vector<std::pair<int, int>> symPairs(int dim) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b) out.emplace_back(a, b);
  return out;
}

std::vector<std::array<int, 3>> symTriples(int dim) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b)
      for (int c = b; c < dim; ++c) out.push_back({a, b, c});
  return out;
}

// C_(ab;c) fully symmetrized (sum over which slot carries the derivative;
// C itself is symmetric).
RatFunc symCovTriple(const std::function<RatFunc(int, int)>& C,
                     const Geometry& g, int a, int b, int c) {
  const std::array<std::array<int, 3>, 3> rot = {{{a, b, c}, {a, c, b}, {b, c, a}}};
  RatFunc acc(SpacePoly(g.dim), g.factors);
  for (const auto& [aa, bb, cc] : rot) {
    acc += C(aa, bb).diff(cc);
    for (int d = 0; d < g.dim; ++d) {
      acc -= g.christoffel[d][cc][aa] * C(d, bb);
      acc -= g.christoffel[d][cc][bb] * C(aa, d);
    }
  }
  return acc;
}

void scatterRows(SparseMatrix& m, const std::vector<RatFunc>& coeffPerUnknown) {
  // one identity sum_u coeff_u(q) * u = 0: clear to polynomials, then one row
  // per q-monomial
  DenProfile prof;
  for (const RatFunc& r : coeffPerUnknown) prof.absorb(r);
  std::map<Expo, SparseMatrix::Row, GrlexGreater> rows;
  for (size_t u = 0; u < coeffPerUnknown.size(); ++u) {
    if (coeffPerUnknown[u].isZero()) continue;
    SpacePoly p = prof.clear(coeffPerUnknown[u]);
    for (const auto& [mono, c] : p.terms())
      rows[mono].emplace_back(static_cast<int>(u), c);
  }
  for (auto& [mono, row] : rows) m.addRow(std::move(row));
}

}  // namespace

PolyMatrix KTFamily::combine(const std::vector<Scalar>& coeff) const {
  PolyMatrix out(dim, std::vector<SpacePoly>(dim, SpacePoly(dim)));
  for (size_t k = 0; k < basis.size(); ++k) {
    if (coeff[k].isZero()) continue;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) out[a][b] += basis[k][a][b] * coeff[k];
  }
  return out;
}

KTFamily solve_kt(const Geometry& g, int degree) {
  return solve_kt(g, KTAnsatz{degree, 2});
}

KTFamily solve_kt(const Geometry& g, const KTAnsatz& ansatz) {
  if (ansatz.degree > 8) throw DegreeOverflow("KT ansatz degree above 8");
  const int n = g.dim;
  const auto pairs = symPairs(n);
  const auto polys = ansatzPolynomials(g, ansatz);
  const size_t nu = pairs.size() * polys.size();
  if (nu == 0) throw EmptyAnsatz("KT ansatz has no coefficients");

  auto unknownOf = [&](size_t pairIdx, size_t polyIdx) {
    return pairIdx * polys.size() + polyIdx;
  };

  SparseMatrix m(static_cast<int>(nu));
  for (const auto& [a, b, c] : symTriples(n)) {
    std::vector<RatFunc> coeff(nu, RatFunc(SpacePoly(n), g.factors));
    for (size_t pi = 0; pi < pairs.size(); ++pi) {
      const auto [alpha, beta] = pairs[pi];
      for (size_t qi = 0; qi < polys.size(); ++qi) {
        RatFunc P(polys[qi], g.factors);
        auto C = [&](int x, int y) -> RatFunc {
          bool hit = (x == alpha && y == beta) || (x == beta && y == alpha);
          return hit ? P : RatFunc(SpacePoly(n), g.factors);
        };
        coeff[unknownOf(pi, qi)] = symCovTriple(C, g, a, b, c);
      }
    }
    scatterRows(m, coeff);
  }

  KTFamily fam;
  fam.dim = n;
  for (const auto& v : nullspace(m)) {
    PolyMatrix C(n, std::vector<SpacePoly>(n, SpacePoly(n)));
    for (size_t pi = 0; pi < pairs.size(); ++pi) {
      const auto [a, b] = pairs[pi];
      SpacePoly comp(n);
      for (size_t qi = 0; qi < polys.size(); ++qi) {
        const Scalar& s = v[unknownOf(pi, qi)];
        if (!s.isZero()) comp += polys[qi] * s;
      }
      C[a][b] = comp;
      C[b][a] = C[a][b];
    }
    if (!kt_equation_holds(C, g))
      throw Error("internal: solve_kt produced a non-KT");
    fam.basis.push_back(std::move(C));
  }
  for (size_t k = 0; k < fam.basis.size(); ++k)
    fam.paramNames.push_back("c" + std::to_string(k + 1));
  return fam;
}

bool kt_equation_holds(const PolyMatrix& C, const Geometry& g) {
  auto entry = [&](int x, int y) { return RatFunc(C[x][y], g.factors); };
  for (const auto& [a, b, c] : symTriples(g.dim))
    if (!symCovTriple(entry, g, a, b, c).isZero()) return false;
  return true;
}

KTFamily builtin_v2(const Scalar& /*eps*/) {
  // (FL.14b) parameters gamma, a, beta, A, B, C; the flat KT equation does
  // not see the signature, so the same basis serves E^2 and L^2.
  const int n = 2;
  SpacePoly x = SpacePoly::variable(n, 0), y = SpacePoly::variable(n, 1);
  SpacePoly one = SpacePoly::constant(n, Scalar(1));
  auto mat = [&](SpacePoly c11, SpacePoly c12, SpacePoly c22) {
    PolyMatrix m(n, std::vector<SpacePoly>(n, SpacePoly(n)));
    m[0][0] = c11;
    m[0][1] = m[1][0] = c12;
    m[1][1] = c22;
    return m;
  };
  KTFamily fam;
  fam.dim = n;
  fam.paramNames = {"gamma", "a", "beta", "A", "B", "C"};
  fam.basis = {
      mat(y * y, -(x * y), x * x),                       // gamma
      mat(y * Scalar(2), -x, SpacePoly(n)),              // a
      mat(SpacePoly(n), -y, x * Scalar(2)),              // beta
      mat(one, SpacePoly(n), SpacePoly(n)),              // A
      mat(SpacePoly(n), SpacePoly(n), one),              // B
      mat(SpacePoly(n), one, SpacePoly(n)),              // C
  };
  return fam;
}

std::vector<std::vector<SpacePoly>> v2_killing_vectors(const Scalar& eps) {
  const int n = 2;
  SpacePoly x = SpacePoly::variable(n, 0), y = SpacePoly::variable(n, 1);
  SpacePoly one = SpacePoly::constant(n, Scalar(1));
  // contravariant (FL.15): (b1 + b3 y, b2 - eps b3 x); covariant components
  // against diag(eps,1): lower with the metric
  return {
      {one * eps, SpacePoly(n)},        // b1 lowered
      {SpacePoly(n), one},              // b2
      {y * eps, -(x * eps)},            // b3 lowered: (eps*y, -eps*x)
  };
}

KTFamily builtin_e3() {
  const int n = 3;
  SpacePoly x = SpacePoly::variable(n, 0), y = SpacePoly::variable(n, 1),
            z = SpacePoly::variable(n, 2);
  SpacePoly one = SpacePoly::constant(n, Scalar(1));
  Scalar h = Scalar::rational(1, 2);

  KTFamily fam;
  fam.dim = n;
  // Components of (FL.E3) as coefficients of a1..a20.
  // Index the six independent components 11,12,13,22,23,33.
  auto zero = [&]() { return SpacePoly(n); };
  std::vector<std::array<SpacePoly, 6>> comp(
      20, {zero(), zero(), zero(), zero(), zero(), zero()});
  // a1: C11 += z^2/2 ; C13 += -xz/2 ; C33 += x^2/2
  comp[0] = {z * z * h, zero(), -(x * z * h), zero(), zero(), x * x * h};
  // a2: C11 += z ; C13 += -x/2
  comp[1] = {z, zero(), -(x * h), zero(), zero(), zero()};
  // a3: C11 += 1
  comp[2] = {one, zero(), zero(), zero(), zero(), zero()};
  // a4: C11 += yz ; C12 += -xz/2 ; C13 += -xy/2 ; C23 += x^2/2
  comp[3] = {y * z, -(x * z * h), -(x * y * h), zero(), x * x * h, zero()};
  // a5: C11 += y ; C12 += -x/2
  comp[4] = {y, -(x * h), zero(), zero(), zero(), zero()};
  // a6: C11 += y^2/2 ; C12 += -xy/2 ; C22 += x^2/2
  comp[5] = {y * y * h, -(x * y * h), zero(), x * x * h, zero(), zero()};
  // a7: C22 += z^2/2 ; C23 += -yz/2 ; C33 += y^2/2
  comp[6] = {zero(), zero(), zero(), z * z * h, -(y * z * h), y * y * h};
  // a8: C23 += -z/2 ; C33 += y
  comp[7] = {zero(), zero(), zero(), zero(), -(z * h), y};
  // a9: C33 += 1
  comp[8] = {zero(), zero(), zero(), zero(), zero(), one};
  // a10: C12 += z^2/2 ; C13 += -yz/2 ; C23 += -xz/2 ; C33 += xy
  comp[9] = {zero(), z * z * h, -(y * z * h), zero(), -(x * z * h), x * y};
  // a11: C13 += -z/2 ; C33 += x
  comp[10] = {zero(), zero(), -(z * h), zero(), zero(), x};
  // a12: C22 += z ; C23 += -y/2
  comp[11] = {zero(), zero(), zero(), z, -(y * h), zero()};
  // a13: C22 += 1
  comp[12] = {zero(), zero(), zero(), one, zero(), zero()};
  // a14: C12 += -yz/2 ; C13 += y^2/2 ; C22 += xz ; C23 += -xy/2
  comp[13] = {zero(), -(y * z * h), y * y * h, x * z, -(x * y * h), zero()};
  // a15: C12 += -y/2 ; C22 += x
  comp[14] = {zero(), -(y * h), zero(), x, zero(), zero()};
  // a16: C12 += z ; C23 += -x
  comp[15] = {zero(), z, zero(), zero(), -x, zero()};
  // a17: C12 += 1
  comp[16] = {zero(), one, zero(), zero(), zero(), zero()};
  // a18: C13 += y ; C23 += -x
  comp[17] = {zero(), zero(), y, zero(), -x, zero()};
  // a19: C13 += 1
  comp[18] = {zero(), zero(), one, zero(), zero(), zero()};
  // a20: C23 += 1
  comp[19] = {zero(), zero(), zero(), zero(), one, zero()};

  for (int k = 0; k < 20; ++k) {
    PolyMatrix m(n, std::vector<SpacePoly>(n, SpacePoly(n)));
    m[0][0] = comp[k][0];
    m[0][1] = m[1][0] = comp[k][1];
    m[0][2] = m[2][0] = comp[k][2];
    m[1][1] = comp[k][3];
    m[1][2] = m[2][1] = comp[k][4];
    m[2][2] = comp[k][5];
    fam.basis.push_back(std::move(m));
    fam.paramNames.push_back("a" + std::to_string(k + 1));
  }
  return fam;
}

KTFamily builtin_e3_covariant() {
  const int n = 3;
  auto eps = [](int i, int j, int k) -> int {
    return (j - i) * (k - i) * (k - j) / 2;  // Levi-Civita on {0,1,2}
  };
  SpacePoly q[3] = {SpacePoly::variable(n, 0), SpacePoly::variable(n, 1),
                    SpacePoly::variable(n, 2)};
  Scalar h = Scalar::rational(1, 2);

  KTFamily fam;
  fam.dim = n;

  auto push = [&](const PolyMatrix& m, const std::string& name) {
    fam.basis.push_back(m);
    fam.paramNames.push_back(name);
  };
  auto zeros = [&]() {
    return PolyMatrix(n, std::vector<SpacePoly>(n, SpacePoly(n)));
  };

  // quadratic part per symmetric A^{mn}: (eps_ikm eps_jln + eps_jkm eps_iln) q^k q^l
  for (int m0 = 0; m0 < n; ++m0)
    for (int n0 = m0; n0 < n; ++n0) {
      PolyMatrix mat = zeros();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          SpacePoly acc(n);
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              // symmetrized contribution of A^{m0 n0} (+ A^{n0 m0} if distinct)
              int c1 = eps(i, k, m0) * eps(j, l, n0) +
                       eps(j, k, m0) * eps(i, l, n0);
              int c2 = (m0 == n0) ? 0
                                  : eps(i, k, n0) * eps(j, l, m0) +
                                        eps(j, k, n0) * eps(i, l, m0);
              int c = c1 + c2;
              if (c != 0) acc += q[k] * q[l] * Scalar(c);
            }
          mat[i][j] = acc;
        }
      push(mat, "A" + std::to_string(m0 + 1) + std::to_string(n0 + 1));
    }

  // linear part per traceless symmetric B^l_i: B_(i^l eps_j)kl q^k
  // five parameters: B00, B01, B02, B11, B12 with B22 = -B00-B11
  const std::array<std::array<int, 2>, 5> bIdx = {
      {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}}};
  for (const auto& [r, c] : bIdx) {
    // build the symmetric traceless matrix with 1 at (r,c) (and (c,r)),
    // compensating the trace on the diagonal
    std::array<std::array<int, 3>, 3> B{};
    B[r][c] += 1;
    if (r != c) B[c][r] += 1;
    if (r == c) B[2][2] -= 1;
    PolyMatrix mat = zeros();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        SpacePoly acc(n);
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            int coeff = B[i][l] * eps(j, k, l) + B[j][l] * eps(i, k, l);
            if (coeff != 0) acc += q[k] * Scalar(coeff) * h;
          }
        mat[i][j] = acc;
      }
    push(mat, "B" + std::to_string(r + 1) + std::to_string(c + 1));
  }

  // lambda part: (lambda_(i delta_j)k - delta_ij lambda_k) q^k
  for (int v = 0; v < n; ++v) {
    PolyMatrix mat = zeros();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        SpacePoly acc(n);
        for (int k = 0; k < n; ++k) {
          Scalar coeff(0);
          if (i == v && j == k) coeff += h;
          if (j == v && i == k) coeff += h;
          if (i == j && k == v) coeff -= Scalar(1);
          if (!coeff.isZero()) acc += q[k] * coeff;
        }
        mat[i][j] = acc;
      }
    push(mat, "l" + std::to_string(v + 1));
  }

  // constant part D_ij
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) {
      PolyMatrix mat = zeros();
      mat[r][c] = SpacePoly::constant(n, Scalar(1));
      mat[c][r] = mat[r][c];
      push(mat, "D" + std::to_string(r + 1) + std::to_string(c + 1));
    }

  return fam;
}

std::optional<ReduceResult> reduce_kt(const PolyMatrix& C, const Geometry& g,
                                      int degree) {
  if (degree > 8) throw DegreeOverflow("reduce_kt ansatz degree above 8");
  const int n = g.dim;
  const auto polys = ansatzPolynomials(g, KTAnsatz{degree, 2});
  const size_t nu = static_cast<size_t>(n) * polys.size();
  auto unknownOf = [&](int comp, size_t polyIdx) {
    return static_cast<size_t>(comp) * polys.size() + polyIdx;
  };

  // rows: L_(a;b) - C_ab = 0, augmented column carries C_ab
  SparseMatrix aug(static_cast<int>(nu) + 1);
  SparseMatrix homog(static_cast<int>(nu));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      std::vector<RatFunc> coeff(nu + 1, RatFunc(SpacePoly(n), g.factors));
      for (int comp = 0; comp < n; ++comp)
        for (size_t qi = 0; qi < polys.size(); ++qi) {
          RatVector L(n, RatFunc(SpacePoly(n), g.factors));
          L[comp] = RatFunc(polys[qi], g.factors);
          // single-entry symmetrized covariant derivative
          Scalar half = Scalar::rational(1, 2);
          RatFunc d = (L[a].diff(b) + L[b].diff(a)) * half;
          for (int c = 0; c < n; ++c) d -= g.christoffel[c][a][b] * L[c];
          coeff[unknownOf(comp, qi)] = d;
        }
      coeff[nu] = RatFunc(C[a][b], g.factors);  // rows are [A | b] for A x = b
      scatterRows(aug, coeff);
      coeff.pop_back();
      scatterRows(homog, coeff);
    }

  auto sol = solve_affine(aug);
  if (!sol) return std::nullopt;

  ReduceResult res;
  res.particular.assign(n, RatFunc(SpacePoly(n), g.factors));
  for (int comp = 0; comp < n; ++comp) {
    SpacePoly acc(n);
    for (size_t qi = 0; qi < polys.size(); ++qi) {
      const Scalar& s = (*sol)[unknownOf(comp, qi)];
      if (!s.isZero()) acc += polys[qi] * s;
    }
    res.particular[comp] = RatFunc(acc, g.factors);
  }
  for (const auto& v : nullspace(homog)) {
    std::vector<SpacePoly> kv(n, SpacePoly(n));
    for (int comp = 0; comp < n; ++comp)
      for (size_t qi = 0; qi < polys.size(); ++qi) {
        const Scalar& s = v[unknownOf(comp, qi)];
        if (!s.isZero()) kv[comp] += polys[qi] * s;
      }
    res.kernel.push_back(std::move(kv));
  }
  return res;
}

std::vector<std::vector<SpacePoly>> reducing_vectors(int n) {
  std::vector<std::vector<SpacePoly>> out;
  auto var = [&](int k) { return SpacePoly::variable(n, k); };
  auto zeroVec = [&]() { return std::vector<SpacePoly>(n, SpacePoly(n)); };

  // gradient KVs S_I,a = delta_Ia
  for (int I = 0; I < n; ++I) {
    auto v = zeroVec();
    v[I] = SpacePoly::constant(n, Scalar(1));
    out.push_back(std::move(v));
  }
  // rotations M_(IJ)a = x_J delta_Ia - x_I delta_Ja
  for (int I = 0; I < n; ++I)
    for (int J = I + 1; J < n; ++J) {
      auto v = zeroVec();
      v[I] = var(J);
      v[J] = -var(I);
      out.push_back(std::move(v));
    }
  // homothetic vector x_a
  {
    auto v = zeroVec();
    for (int k = 0; k < n; ++k) v[k] = var(k);
    out.push_back(std::move(v));
  }
  // non-proper ACs S_I S_J,a = x_I delta_Ja, all I, J
  for (int I = 0; I < n; ++I)
    for (int J = 0; J < n; ++J) {
      auto v = zeroVec();
      v[J] = var(I);
      out.push_back(std::move(v));
    }
  // S_I M_(JK)a
  for (int I = 0; I < n; ++I)
    for (int J = 0; J < n; ++J)
      for (int K = J + 1; K < n; ++K) {
        auto v = zeroVec();
        v[J] = var(I) * var(K);
        v[K] = -(var(I) * var(J));
        out.push_back(std::move(v));
      }
  return out;
}

int family_span_rank(const std::vector<PolyMatrix>& mats) {
  if (mats.empty()) return 0;
  const int n = static_cast<int>(mats[0].size());
  // column index per (component pair, monomial)
  std::map<std::pair<int, Expo>, int,
           bool (*)(const std::pair<int, Expo>&, const std::pair<int, Expo>&)>
      colIdx([](const std::pair<int, Expo>& a, const std::pair<int, Expo>& b) {
        if (a.first != b.first) return a.first < b.first;
        return GrlexGreater{}(a.second, b.second);
      });
  auto pairs = symPairs(n);
  for (const auto& m : mats)
    for (size_t pi = 0; pi < pairs.size(); ++pi)
      for (const auto& [mono, c] : m[pairs[pi].first][pairs[pi].second].terms())
        colIdx.try_emplace({static_cast<int>(pi), mono},
                           static_cast<int>(colIdx.size()));
  SparseMatrix sm(static_cast<int>(colIdx.size()));
  for (const auto& m : mats) {
    SparseMatrix::Row row;
    for (size_t pi = 0; pi < pairs.size(); ++pi)
      for (const auto& [mono, c] : m[pairs[pi].first][pairs[pi].second].terms())
        row.emplace_back(colIdx[{static_cast<int>(pi), mono}], c);
    sm.addRow(std::move(row));
  }
  return sparse_rank(sm);
}

bool same_family_span(const std::vector<PolyMatrix>& a,
                      const std::vector<PolyMatrix>& b) {
  std::vector<PolyMatrix> stacked = a;
  stacked.insert(stacked.end(), b.begin(), b.end());
  int ra = family_span_rank(a), rb = family_span_rank(b);
  return ra == rb && family_span_rank(stacked) == ra;
}

}  // namespace kinetic
