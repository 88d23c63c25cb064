#pragma once

// Closed discrete curves in universal-cover coordinates. Winding is data,
// never inferred; the closure vertex is stored explicitly:
// v.back() = v.front() + (p lx, q ly).

#include <array>
#include <vector>

#include "rflab/loops/surface.hpp"

namespace rflab::loops {

struct WindingClass {
    int p = 0, q = 0;
    bool trivial() const { return p == 0 && q == 0; }
    WindingClass times(int k) const { return {k * p, k * q}; }
};

struct LoopPolyline {
    std::vector<std::array<double, 2>> v;
    WindingClass w;

    int segments() const { return static_cast<int>(v.size()) - 1; }
    void validate(double lx, double ly) const; // throws std::invalid_argument
};

double loop_length(const LoopPolyline& c, const SurfaceMetric& m);

LoopPolyline make_straight_loop(const SurfaceMetric& m, WindingClass w,
                                std::array<double, 2> base, int nseg);

// Redistribute vertices to uniform g-arclength along the polyline; endpoints
// (and exact closure) preserved.
LoopPolyline resample_uniform(const LoopPolyline& c, const SurfaceMetric& m, int nseg);

} // namespace rflab::loops
