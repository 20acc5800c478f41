#include <doctest.h>

#include "kinetic/prng.hpp"
#include "kinetic/systems.hpp"
#include "kinetic/textio.hpp"

using namespace kinetic;

namespace {

ParseContext ctxFor(const Geometry& g, bool vel = false, bool time = false) {
  ParseContext c;
  c.coords = g.coords;
  c.factors = g.factors;
  c.allowVelocities = vel;
  c.allowTime = time;
  return c;
}

}  // namespace

TEST_CASE("euclidean geometry has vanishing christoffels") {
  Geometry g = euclidean_geometry(3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) CHECK(g.christoffel[a][b][c].isZero());
  Geometry v2 = v2_geometry(Scalar(-1));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) CHECK(v2.christoffel[a][b][c].isZero());
}

TEST_CASE("z^2 metric christoffels match the geodesic equations") {
  Geometry g = z2_metric_geometry();
  ParseContext ctx = ctxFor(g);
  // Gamma^x_xz = 1/z, Gamma^z_xx = -z, Gamma^y_yz = 1/z, Gamma^z_yy = -z
  CHECK(g.christoffel[0][0][2] == parse_ratfunc("1/z", ctx));
  CHECK(g.christoffel[1][1][2] == parse_ratfunc("1/z", ctx));
  CHECK(g.christoffel[2][0][0] == parse_ratfunc("-z", ctx));
  CHECK(g.christoffel[2][1][1] == parse_ratfunc("-z", ctx));
  CHECK(g.christoffel[2][0][1].isZero());
  CHECK(g.christoffel[0][0][0].isZero());
  // symmetry in the lower pair
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        CHECK(g.christoffel[a][b][c] == g.christoffel[a][c][b]);
}

TEST_CASE("build_geometry rejects a wrong inverse") {
  auto facs = std::make_shared<FactorSet>();
  PolyMatrix m(2, std::vector<SpacePoly>(2, SpacePoly(2)));
  m[0][0] = SpacePoly::constant(2, Scalar(2));
  m[1][1] = SpacePoly::constant(2, Scalar(1));
  RatMatrix inv(2, RatVector(2, RatFunc::constant(2, Scalar(0), facs)));
  inv[0][0] = RatFunc::constant(2, Scalar(1), facs);  // wrong: should be 1/2
  inv[1][1] = RatFunc::constant(2, Scalar(1), facs);
  CHECK_THROWS_AS(build_geometry(m, inv, facs, {"x", "y"}), InverseMismatch);
}

TEST_CASE("metric compatibility gamma_ab;c = 0") {
  for (const Geometry& g : {euclidean_geometry(2), z2_metric_geometry()}) {
    const int n = g.dim;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          RatFunc d(g.metric[a][b].diff(c), g.factors);
          for (int e = 0; e < n; ++e) {
            d -= g.christoffel[e][c][a] * g.metric[e][b];
            d -= g.christoffel[e][c][b] * g.metric[a][e];
          }
          CHECK(d.isZero());
        }
  }
}

TEST_CASE("sym_cov_deriv: homothetic vector of the z^2 metric") {
  Geometry g = z2_metric_geometry();
  ParseContext ctx = ctxFor(g);
  // L = (0, 0, c1 z) gives L_(a;b) = c1 gamma_ab (paper's homothetic vector)
  RatVector L = {parse_ratfunc("0", ctx), parse_ratfunc("0", ctx),
                 parse_ratfunc("3*z", ctx)};
  RatMatrix d = sym_cov_deriv(L, g);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(d[a][b] == RatFunc(g.metric[a][b] * Scalar(3), g.factors));
  // Killing vectors: L = (z^2(b1 y + b2), -z^2(b1 x + b3), 0)
  RatVector kv = {parse_ratfunc("z^2*(5*y+7)", ctx),
                  parse_ratfunc("-z^2*(5*x+2)", ctx), parse_ratfunc("0", ctx)};
  RatMatrix dk = sym_cov_deriv(kv, g);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(dk[a][b].isZero());
}

TEST_CASE("total_derivative: whittaker first integrals annihilate") {
  DynamicalSystem sys = whittaker_system();
  ParseContext ctx = ctxFor(sys.geometry, true, true);
  // d/dt (dy - x) = 0
  VelocityExpr j12 = parse_expression("dy - x", ctx);
  CHECK(total_derivative(j12, sys).isZero());
  // d/dt (e^t (dx - x)) = 0
  VelocityExpr j21 = parse_expression("exp(t)*(dx - x)", ctx);
  CHECK(total_derivative(j21, sys).isZero());
  // d/dt (t(dy-x) + dx - y) = 0
  VelocityExpr j13 = parse_expression("t*(dy - x) + dx - y", ctx);
  CHECK(total_derivative(j13, sys).isZero());
  // a non-integral has a residual: d/dt (dy + x) = 2 dx
  VelocityExpr bad = parse_expression("dy + x", ctx);
  VelocityExpr r = total_derivative(bad, sys);
  CHECK(!r.isZero());
  CHECK((r - parse_expression("2*dx", ctx)).isZero());
  // constants die
  CHECK(total_derivative(parse_expression("5", ctx), sys).isZero());
}

TEST_CASE("total_derivative: free-system energy is conserved exactly") {
  DynamicalSystem sys = geodesic_z2_system();
  ParseContext ctx = ctxFor(sys.geometry, true, true);
  VelocityExpr T =
      parse_expression("1/2*(z^2*dx^2 + z^2*dy^2 + dz^2)", ctx);
  CHECK(total_derivative(T, sys).isZero());
  VelocityExpr i2b =
      parse_expression("-t^2*(1/2*(z^2*dx^2+z^2*dy^2+dz^2)) + t*z*dz - 1/2*z^2",
                       ctx);
  CHECK(total_derivative(i2b, sys).isZero());
}

TEST_CASE("total_derivative is a derivation on products") {
  DynamicalSystem sys = whittaker_system();
  ParseContext ctx = ctxFor(sys.geometry, true, true);
  SplitMix64 rng(99);
  auto randExpr = [&]() {
    VelocityExpr e(2);
    for (int t = 0; t < 4; ++t) {
      Expo ve;
      if (rng.below(2)) ve.e[rng.below(2)] = 1;  // velocity degree <= 1
      Expo qe;
      int deg = static_cast<int>(rng.below(3));
      for (int j = 0; j < deg; ++j) qe.e[rng.below(2)] += 1;
      Profile p{Scalar(rng.range(-1, 1)), static_cast<int>(rng.below(2))};
      e.add(p, ve,
            RatFunc(SpacePoly::monomial(2, qe,
                                        Scalar::rational(rng.range(-4, 4),
                                                         rng.range(1, 3))),
                    sys.geometry.factors));
    }
    return e;
  };
  for (int trial = 0; trial < 200; ++trial) {
    VelocityExpr a = randExpr(), b = randExpr();
    VelocityExpr lhs = total_derivative(a * b, sys);
    VelocityExpr rhs = total_derivative(a, sys) * b + a * total_derivative(b, sys);
    CHECK((lhs - rhs).isZero());
  }
}

TEST_CASE("velocity degree guard") {
  DynamicalSystem sys = whittaker_system();
  ParseContext ctx = ctxFor(sys.geometry, true, true);
  VelocityExpr cubic = parse_expression("dx^3", ctx);
  CHECK_THROWS_AS(total_derivative(cubic, sys), DegreeOverflow);
}

TEST_CASE("momentum map") {
  // Euclidean: qdot -> p identically
  Geometry e2 = euclidean_geometry(2);
  ParseContext ctx = ctxFor(e2, true, true);
  VelocityExpr v = parse_expression("dx + 2*dy^2", ctx);
  VelocityExpr mapped = momentum_map(v, e2);
  CHECK((mapped - v).isZero());  // same monomial layout

  // z^2 metric: T -> (p1^2/z^2 + p2^2/z^2 + p3^2)/2 and z^2 dx -> p1
  Geometry g = z2_metric_geometry();
  ParseContext ctx3 = ctxFor(g, true, true);
  VelocityExpr T =
      parse_expression("1/2*(z^2*dx^2 + z^2*dy^2 + dz^2)", ctx3);
  VelocityExpr Tp = momentum_map(T, g);
  VelocityExpr expect =
      parse_expression("1/2*(dx^2/z^2 + dy^2/z^2 + dz^2)", ctx3);
  CHECK((Tp - expect).isZero());
  VelocityExpr mom = momentum_map(parse_expression("z^2*dx", ctx3), g);
  CHECK((mom - parse_expression("dx", ctx3)).isZero());
}
