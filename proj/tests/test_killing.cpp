#include <doctest.h>

#include "kinetic/killing.hpp"
#include "kinetic/linalg.hpp"
#include "kinetic/prng.hpp"
#include "kinetic/systems.hpp"
#include "kinetic/textio.hpp"

using namespace kinetic;

namespace {

int vector_family_rank(const std::vector<std::vector<SpacePoly>>& vecs) {
  if (vecs.empty()) return 0;
  std::map<std::pair<int, Expo>, int,
           bool (*)(const std::pair<int, Expo>&, const std::pair<int, Expo>&)>
      colIdx([](const std::pair<int, Expo>& a, const std::pair<int, Expo>& b) {
        if (a.first != b.first) return a.first < b.first;
        return GrlexGreater{}(a.second, b.second);
      });
  for (const auto& v : vecs)
    for (size_t c = 0; c < v.size(); ++c)
      for (const auto& [mono, s] : v[c].terms())
        colIdx.try_emplace({static_cast<int>(c), mono},
                           static_cast<int>(colIdx.size()));
  SparseMatrix m(static_cast<int>(colIdx.size()));
  for (const auto& v : vecs) {
    SparseMatrix::Row row;
    for (size_t c = 0; c < v.size(); ++c)
      for (const auto& [mono, s] : v[c].terms())
        row.emplace_back(colIdx[{static_cast<int>(c), mono}], s);
    m.addRow(std::move(row));
  }
  return sparse_rank(m);
}

bool same_vector_span(const std::vector<std::vector<SpacePoly>>& a,
                      const std::vector<std::vector<SpacePoly>>& b) {
  auto stacked = a;
  stacked.insert(stacked.end(), b.begin(), b.end());
  int ra = vector_family_rank(a), rb = vector_family_rank(b);
  return ra == rb && vector_family_rank(stacked) == ra;
}

// (eq.Kep.5) with one parameter set to 1, the rest 0
std::vector<std::vector<SpacePoly>> kep5_family() {
  ParseContext ctx;
  ctx.coords = {"x", "y", "z"};
  const char* comps[20][3] = {
      {"2*z", "0", "-2*x"},         // a1
      {"x*z", "0", "-x^2"},         // a2
      {"x", "0", "0"},              // a3
      {"2*y", "-2*x", "0"},         // a4
      {"x*y", "-x^2", "0"},         // a5
      {"1", "0", "0"},              // a6
      {"0", "2*z", "-2*y"},         // a7
      {"0", "-z^2", "y*z"},         // a8
      {"0", "0", "z"},              // a9
      {"0", "0", "1"},              // a10
      {"-z^2", "0", "x*z"},         // a11
      {"0", "y*z", "-y^2"},         // a12
      {"0", "y", "0"},              // a13
      {"0", "1", "0"},              // a14
      {"-y^2", "x*y", "0"},         // a15
      {"2*y*z", "0", "-2*x*y"},     // a16
      {"0", "2*x", "0"},            // a17
      {"2*y*z", "-2*x*z", "0"},     // a18
      {"0", "0", "2*x"},            // a19
      {"0", "0", "2*y"},            // a20
  };
  std::vector<std::vector<SpacePoly>> out;
  for (auto& row : comps)
    out.push_back({parse_poly(row[0], ctx), parse_poly(row[1], ctx),
                   parse_poly(row[2], ctx)});
  return out;
}

}  // namespace

TEST_CASE("solve_kt on E^2 degree 2 spans the closed-form family") {
  Geometry e2 = euclidean_geometry(2);
  KTFamily fam = solve_kt(e2, 2);
  CHECK(fam.size() == 6);
  KTFamily builtin = builtin_v2(Scalar(1));
  CHECK(builtin.size() == 6);
  for (const auto& C : builtin.basis) CHECK(kt_equation_holds(C, e2));
  CHECK(same_family_span(fam.basis, builtin.basis));
}

TEST_CASE("solve_kt on E^3 degree 2 gives the 20-dim family") {
  Geometry e3 = euclidean_geometry(3);
  KTFamily fam = solve_kt(e3, 2);
  CHECK(fam.size() == 20);
  KTFamily e3fam = builtin_e3();
  for (const auto& C : e3fam.basis) CHECK(kt_equation_holds(C, e3));
  CHECK(same_family_span(fam.basis, e3fam.basis));
}

TEST_CASE("covariant E^3 family spans the component family") {
  Geometry e3 = euclidean_geometry(3);
  KTFamily cov = builtin_e3_covariant();
  CHECK(cov.size() == 20);
  for (const auto& C : cov.basis) CHECK(kt_equation_holds(C, e3));
  CHECK(family_span_rank(cov.basis) == 20);
  CHECK(same_family_span(cov.basis, builtin_e3().basis));
}

TEST_CASE("solve_kt on the z^2 metric finds the 7 KTs") {
  Geometry g = z2_metric_geometry();
  KTFamily fam = solve_kt(g, 6);
  CHECK(fam.size() == 7);
  // the kinetic energy direction: C = gamma is among them
  PolyMatrix gamma = g.metric;
  std::vector<PolyMatrix> withGamma = fam.basis;
  withGamma.push_back(gamma);
  CHECK(family_span_rank(withGamma) == 7);
}

TEST_CASE("reduce_kt on E^2: gamma-direction is irreducible, FL.14.1 reduces") {
  Geometry e2 = euclidean_geometry(2);
  KTFamily fam = builtin_v2(Scalar(1));
  // gamma != 0 -> irreducible
  PolyMatrix C = fam.combine({Scalar(1), Scalar(0), Scalar(0), Scalar(0),
                              Scalar(0), Scalar(0)});
  CHECK(!reduce_kt(C, e2, 3).has_value());
  // gamma = 0 -> reducible; round trip through sym_cov_deriv
  PolyMatrix R = fam.combine({Scalar(0), Scalar(2), Scalar(-1), Scalar(3),
                              Scalar(5), Scalar(7)});
  auto red = reduce_kt(R, e2, 3);
  REQUIRE(red.has_value());
  RatMatrix back = sym_cov_deriv(red->particular, e2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      CHECK(back[a][b] == RatFunc(R[a][b], e2.factors));
  // kernel contains exactly the Killing vectors (3 for E^2 at degree 3)
  CHECK(red->kernel.size() == 3);
}

TEST_CASE("reduce_kt on the z^2 metric: c1*gamma reduces to the homothety") {
  Geometry g = z2_metric_geometry();
  PolyMatrix C(3, std::vector<SpacePoly>(3, SpacePoly(3)));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) C[a][b] = g.metric[a][b] * Scalar(4);
  auto red = reduce_kt(C, g, 3);
  REQUIRE(red.has_value());
  RatMatrix back = sym_cov_deriv(red->particular, g);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(back[a][b] == RatFunc(C[a][b], g.factors));
  // kernel = the three Killing vectors z^2(b1 y + b2, ...) of the paper
  CHECK(red->kernel.size() == 3);
}

TEST_CASE("round trip reduce_kt . sym_cov_deriv = identity on reducibles") {
  SplitMix64 rng(411);
  Geometry geos[2] = {euclidean_geometry(2), euclidean_geometry(3)};
  for (int trial = 0; trial < 200; ++trial) {
    const Geometry& g = geos[trial % 2];
    const int n = g.dim;
    // random polynomial vector of degree <= 2
    RatVector L(n, RatFunc(SpacePoly(n), g.factors));
    for (int c = 0; c < n; ++c) {
      SpacePoly p(n);
      for (int t = 0; t < 3; ++t) {
        Expo e;
        int deg = static_cast<int>(rng.below(3));
        for (int j = 0; j < deg; ++j) e.e[rng.below(n)] += 1;
        p.add(e, Scalar(rng.range(-4, 4)));
      }
      L[c] = RatFunc(p, g.factors);
    }
    RatMatrix C = sym_cov_deriv(L, g);
    PolyMatrix Cp(n, std::vector<SpacePoly>(n, SpacePoly(n)));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        REQUIRE(C[a][b].isPolynomial());
        Cp[a][b] = C[a][b].num();
      }
    auto red = reduce_kt(Cp, g, 3);
    REQUIRE(red.has_value());
    RatMatrix back = sym_cov_deriv(red->particular, g);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) CHECK(back[a][b] == C[a][b]);
  }
}

TEST_CASE("reducing vectors: E^2 span matches FL.14, E^3 matches Kep.5") {
  // FL.14 family: 8 parameters
  ParseContext ctx;
  ctx.coords = {"x", "y"};
  std::vector<std::vector<SpacePoly>> fl14;
  const char* comps[8][2] = {
      {"-2*y^2", "2*x*y"},  // beta
      {"2*x*y", "-2*x^2"},  // a
      {"x", "0"},           // A
      {"y", "0"},           // a8
      {"1", "0"},           // a11
      {"0", "x"},           // a10
      {"0", "y"},           // B
      {"0", "1"},           // a9
  };
  for (auto& row : comps)
    fl14.push_back({parse_poly(row[0], ctx), parse_poly(row[1], ctx)});
  auto gens2 = reducing_vectors(2);
  CHECK(vector_family_rank(gens2) == 8);
  CHECK(same_vector_span(gens2, fl14));

  auto gens3 = reducing_vectors(3);
  auto kep5 = kep5_family();
  CHECK(vector_family_rank(gens3) == 20);
  CHECK(vector_family_rank(kep5) == 20);
  CHECK(same_vector_span(gens3, kep5));
}

TEST_CASE("KVs generate the zero KT; HV generates the metric") {
  Geometry e3 = euclidean_geometry(3);
  auto gens = reducing_vectors(3);
  // first 3 gradient KVs + 3 rotations map to zero
  for (int k = 0; k < 6; ++k) {
    RatVector L;
    for (const auto& c : gens[k]) L.emplace_back(c, e3.factors);
    RatMatrix d = sym_cov_deriv(L, e3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) CHECK(d[a][b].isZero());
  }
  // the homothetic vector is gens[6]
  RatVector hv;
  for (const auto& c : gens[6]) hv.emplace_back(c, e3.factors);
  RatMatrix d = sym_cov_deriv(hv, e3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(d[a][b] == RatFunc(e3.metric[a][b], e3.factors));
}

TEST_CASE("sym_cov_deriv of Kep.5 equals the restricted FL.E3 family") {
  Geometry e3 = euclidean_geometry(3);
  auto kep5 = kep5_family();
  KTFamily e3fam = builtin_e3();
  // expected: FL.E3 restricted to a1=a4=a6=a7=a10=a14=0 (indices 0-based:
  // 0,3,5,6,9,13), with parameter mapping matching Kep.5's labels
  std::vector<PolyMatrix> images;
  for (const auto& v : kep5) {
    RatVector L;
    for (const auto& c : v) L.emplace_back(c, e3.factors);
    RatMatrix d = sym_cov_deriv(L, e3);
    PolyMatrix m(3, std::vector<SpacePoly>(3, SpacePoly(3)));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) m[a][b] = d[a][b].num();
    images.push_back(std::move(m));
  }
  std::vector<PolyMatrix> restricted;
  for (int k = 0; k < 20; ++k) {
    if (k == 0 || k == 3 || k == 5 || k == 6 || k == 9 || k == 13) continue;
    restricted.push_back(e3fam.basis[k]);
  }
  CHECK(family_span_rank(restricted) == 14);
  CHECK(same_family_span(images, restricted));
}

TEST_CASE("KT ansatz guards") {
  Geometry e2 = euclidean_geometry(2);
  CHECK_THROWS_AS(solve_kt(e2, 9), DegreeOverflow);
}
