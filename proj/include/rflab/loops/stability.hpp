#pragma once

// Second-variation (index form) integral along a geodesic:
//   Int ( |nabla_V X|^2 - <R(V, X) X, V> ) ds
// for test fields X given by components in the frame normals. Must be
// nonnegative on minimizers. Also the flow derivative of length,
//   d/dt length = -Int Rc(V, V) ds.

#include "rflab/loops/frame.hpp"

namespace rflab::loops {

// comps[i][k]: coefficient of normal direction i at vertex k (size
// (ambient_n - 1) x (vertices)). Direction 0 is the in-surface normal;
// directions 1.. are the analytic sphere normals (warped family).
double stability_integral(const LoopPolyline& geod, const GeodesicFrame& frame,
                          const SurfaceMetric& m,
                          const std::vector<std::vector<double>>& comps);

double length_derivative(const LoopPolyline& geod, const SurfaceMetric& m);

} // namespace rflab::loops
