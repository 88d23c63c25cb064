#pragma once

// Orthonormal frames along closed geodesics. The in-surface unit normal is
// parallel-transported numerically around the loop; the measured holonomy
// defect is then distributed at a constant rate along arclength, which
// realizes the frame with the smallest sup rotation rate. On the warped
// family the n-2 sphere directions orthogonal to the reduction are exactly
// parallel (Christoffel cancellation), contributing zero rotation.

#include "rflab/loops/polyline.hpp"

namespace rflab::loops {

struct GeodesicFrame {
    std::vector<std::array<double, 2>> tangent; // unit V per segment
    std::vector<std::array<double, 2>> normal;  // corrected e_1 per vertex
    double rotation_rate = 0;  // sup |nabla_V e_i| = |holonomy| / length
    double holonomy_angle = 0; // signed transport defect around the loop
    double length = 0;
    int ambient_n = 2;
    int analytic_parallel = 0; // count of exactly parallel sphere normals
};

// Throws std::invalid_argument when the input fails the geodesic residual
// gate.
GeodesicFrame build_frame(const LoopPolyline& geodesic, const SurfaceMetric& m,
                          double residual_tol = 5e-3);

} // namespace rflab::loops
