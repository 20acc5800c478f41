#pragma once

#include "kinetic/geometry.hpp"

namespace kinetic {

/// Flat Euclidean geometry in Cartesian coordinates.
Geometry euclidean_geometry(int dim);

/// 2d geometry with metric diag(eps, 1), eps = +1 or -1.
Geometry v2_geometry(const Scalar& eps);

/// Metric diag(z^2, z^2, 1); declared denominator factor {z}.
Geometry z2_metric_geometry();

/// Free particle on the given geometry (Q = 0, A = 0, V = 0).
DynamicalSystem free_system(Geometry g);

/// xdd = x, ydd = xd. Euclidean kinetic metric; V = -x^2/2,
/// A^a_b = [[0,0],[1,0]], Q = (-x, 0).
DynamicalSystem whittaker_system();

/// Geodesics of the z^2 metric.
DynamicalSystem geodesic_z2_system();

/// xdd + k x = p y - 2 m xd, ydd + k y = -p x - 2 m yd at exact parameter
/// values. V = k(x^2+y^2)/2, A = -2m I, Q = (kx - py, ky + px).
DynamicalSystem damped_oscillator_system(const Scalar& m, const Scalar& k,
                                         const Scalar& p);

/// Conservative oscillator V = (x^2 + y^2)/2 on E^2 (used as the generic
/// conservative test system).
DynamicalSystem harmonic_2d_system();

}  // namespace kinetic
