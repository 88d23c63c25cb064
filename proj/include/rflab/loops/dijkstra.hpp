#pragma once

// Independent upper-bound oracle: shortest lattice path in the universal
// cover from a base node to its (p, q)-translate, on a 16-neighbor stencil
// with metricated edge weights. Converges to the class infimum from above
// under refinement; worst-case stencil anisotropy bias is 1/cos(atan(1/2)/2)
// - 1, about 2.8%, attained between the axis and knight directions on flat
// metrics.

#include "rflab/loops/polyline.hpp"

namespace rflab::loops {

inline constexpr double kDijkstraStencilBias = 0.028;

struct DijkstraOptions {
    int refine = 1;                  // lattice density multiplier
    double margin_periods = 1.0;     // window margin around the translate box
    std::size_t node_cap = 8000000;  // memory budget; reject above
};

// Throws std::invalid_argument for trivial winding, std::length_error when
// the lattice exceeds node_cap (the message names the largest admissible
// refinement).
double dijkstra_cover_oracle(WindingClass w, const SurfaceMetric& m,
                             const DijkstraOptions& opts = {});

} // namespace rflab::loops
