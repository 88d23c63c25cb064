#pragma once

// Birkhoff-style curve shortening: natural-gradient descent on the discrete
// length with periodic uniform-arclength resampling. Terminates when the
// relative length decrease over a 100-iteration window drops below 1e-9.
// The geodesic residual is the largest metric-normalized length gradient per
// unit local segment length (a discrete geodesic curvature).

#include "rflab/loops/polyline.hpp"

namespace rflab::loops {

struct ShortenOptions {
    int max_iter = 20000;
    double window_rel_tol = 1e-9;
    int window = 100;
    int resample_every = 50;
    int vertices = 0; // 0 keeps the seed's count
    double residual_tol = 5e-3;
};

struct ShortenResult {
    LoopPolyline loop;
    double length = 0;
    double residual = 0;
    int iterations = 0;
    bool converged = false;
};

// Throws std::invalid_argument for trivial winding (degenerate collapse).
ShortenResult shorten_loop(const LoopPolyline& seed, const SurfaceMetric& m,
                           const ShortenOptions& opts = {});

// Discrete geodesic-curvature residual of a loop (used by shorten_loop and
// as the precondition gate for frames).
double geodesic_residual(const LoopPolyline& c, const SurfaceMetric& m);

} // namespace rflab::loops
