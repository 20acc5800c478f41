#include "kinetic/systems.hpp"

namespace kinetic {

namespace {

std::vector<std::string> defaultNames(int dim) {
  static const char* names[] = {"x", "y", "z", "u", "v", "w"};
  std::vector<std::string> out;
  for (int k = 0; k < dim; ++k) out.emplace_back(names[k]);
  return out;
}

PolyMatrix zeroMatrix(int n) {
  return PolyMatrix(n, std::vector<SpacePoly>(n, SpacePoly(n)));
}

}  // namespace

Geometry euclidean_geometry(int dim) {
  auto facs = std::make_shared<FactorSet>();
  PolyMatrix g = zeroMatrix(dim);
  RatMatrix inv(dim, RatVector(dim));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      Scalar v(a == b ? 1 : 0);
      g[a][b] = SpacePoly::constant(dim, v);
      inv[a][b] = RatFunc::constant(dim, v, facs);
    }
  return build_geometry(g, inv, facs, defaultNames(dim));
}

Geometry v2_geometry(const Scalar& eps) {
  auto facs = std::make_shared<FactorSet>();
  PolyMatrix g = zeroMatrix(2);
  RatMatrix inv(2, RatVector(2));
  g[0][0] = SpacePoly::constant(2, eps);
  g[1][1] = SpacePoly::constant(2, Scalar(1));
  inv[0][0] = RatFunc::constant(2, eps.inverse(), facs);
  inv[0][1] = inv[1][0] = RatFunc::constant(2, Scalar(0), facs);
  inv[1][1] = RatFunc::constant(2, Scalar(1), facs);
  return build_geometry(g, inv, facs, defaultNames(2));
}

Geometry z2_metric_geometry() {
  const int n = 3;
  auto facs = std::make_shared<FactorSet>(
      std::vector<SpacePoly>{SpacePoly::variable(n, 2)});  // z
  PolyMatrix g = zeroMatrix(n);
  SpacePoly z2 = SpacePoly::variable(n, 2) * SpacePoly::variable(n, 2);
  g[0][0] = z2;
  g[1][1] = z2;
  g[2][2] = SpacePoly::constant(n, Scalar(1));
  RatMatrix inv(n, RatVector(n, RatFunc(SpacePoly(n), facs)));
  inv[0][0] = RatFunc(SpacePoly::constant(n, Scalar(1)), {2}, facs);
  inv[1][1] = inv[0][0];
  inv[2][2] = RatFunc::constant(n, Scalar(1), facs);
  return build_geometry(g, inv, facs, defaultNames(n));
}

DynamicalSystem free_system(Geometry g) {
  DynamicalSystem sys;
  int n = g.dim;
  sys.geometry = std::move(g);
  sys.Q.assign(n, SpacePoly(n));
  sys.A = zeroMatrix(n);
  sys.V = SpacePoly(n);
  return sys;
}

DynamicalSystem whittaker_system() {
  DynamicalSystem sys;
  sys.geometry = euclidean_geometry(2);
  sys.Q = {SpacePoly::variable(2, 0) * Scalar(-1), SpacePoly(2)};
  sys.A = zeroMatrix(2);
  sys.A[1][0] = SpacePoly::constant(2, Scalar(1));
  // V = -x^2/2
  sys.V = SpacePoly::monomial(2, Expo::unit(0, 2), Scalar::rational(-1, 2));
  return sys;
}

DynamicalSystem geodesic_z2_system() {
  return free_system(z2_metric_geometry());
}

DynamicalSystem damped_oscillator_system(const Scalar& m, const Scalar& k,
                                         const Scalar& p) {
  DynamicalSystem sys;
  sys.geometry = euclidean_geometry(2);
  SpacePoly x = SpacePoly::variable(2, 0), y = SpacePoly::variable(2, 1);
  sys.Q = {x * k - y * p, y * k + x * p};
  sys.A = zeroMatrix(2);
  sys.A[0][0] = SpacePoly::constant(2, m * Scalar(-2));
  sys.A[1][1] = sys.A[0][0];
  SpacePoly half = SpacePoly::constant(2, Scalar::rational(1, 2) * k);
  sys.V = half * (x * x + y * y);
  return sys;
}

DynamicalSystem harmonic_2d_system() {
  DynamicalSystem sys;
  sys.geometry = euclidean_geometry(2);
  SpacePoly x = SpacePoly::variable(2, 0), y = SpacePoly::variable(2, 1);
  sys.Q = {x, y};
  sys.A = zeroMatrix(2);
  sys.V = SpacePoly::constant(2, Scalar::rational(1, 2)) * (x * x + y * y);
  return sys;
}

}  // namespace kinetic
