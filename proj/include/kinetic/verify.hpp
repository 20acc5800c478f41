#pragma once

#include "kinetic/ddcomplex.hpp"
#include "kinetic/qfi.hpp"

namespace kinetic {

struct CertifyResult {
  bool certified = false;
  VelocityExpr residual;  // nonzero buckets of dI/dt when not certified
};

/// Exact certificate: dI/dt via total_derivative, denominators cleared,
/// grouped by time profile; certified iff every bucket is the zero
/// polynomial. No tolerances anywhere on this path.
CertifyResult certify_exact(const QFI& I, const DynamicalSystem& sys);

struct Trajectory {
  double step = 0;
  double tEnd = 0;
  // states[k] = (q, qdot) at t = k * step, in double-double complex
  std::vector<std::vector<DDC>> states;
};

/// Classical RK4 on the first-order system (q, qdot), fixed step,
/// double-double arithmetic. Throws SingularityHit when a declared
/// denominator factor comes within the guard band (1e-8) along the path.
Trajectory integrate(const DynamicalSystem& sys, const std::vector<Scalar>& q0,
                     const std::vector<Scalar>& v0, double tEnd, double step);

struct DriftReport {
  std::complex<double> initial;  // I(0)
  double drift = 0;              // max |I(t)-I(0)| / max(1, |I(0)|)
  double step = 0;
  double tEnd = 0;
  int samples = 0;
};

DriftReport drift(const QFI& I, const DynamicalSystem& sys,
                  const std::vector<Scalar>& q0, const std::vector<Scalar>& v0,
                  double tEnd, double step);

/// The default trajectory battery: `count` pseudo-random rational initial
/// conditions with components j/16 in [-2, 2], fixed seed. Draws are
/// rejected (and redrawn, deterministically) when the starting point or the
/// integrated path trips the singularity guard, so the battery is always
/// usable; the conditions actually used are published in reports.
std::vector<std::pair<std::vector<Scalar>, std::vector<Scalar>>>
default_battery(const DynamicalSystem& sys, uint64_t seed, int count = 5,
                double tEnd = 5.0, double probeStep = 1e-2);

}  // namespace kinetic
