#include "rflab/loops/polyline.hpp"

#include <cmath>
#include <stdexcept>

namespace rflab::loops {

void LoopPolyline::validate(double lx, double ly) const {
    if (segments() < 16) throw std::invalid_argument("loop: need at least 16 segments");
    const double cx = v.front()[0] + w.p * lx;
    const double cy = v.front()[1] + w.q * ly;
    if (v.back()[0] != cx || v.back()[1] != cy)
        throw std::invalid_argument("loop: closure not exact");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] == v[i - 1]) throw std::invalid_argument("loop: repeated consecutive vertices");
}

double loop_length(const LoopPolyline& c, const SurfaceMetric& m) {
    double len = 0;
    for (std::size_t i = 0; i + 1 < c.v.size(); ++i) {
        const double dx = c.v[i + 1][0] - c.v[i][0];
        const double dy = c.v[i + 1][1] - c.v[i][1];
        const Mat2 g = m.metric(0.5 * (c.v[i][0] + c.v[i + 1][0]),
                                0.5 * (c.v[i][1] + c.v[i + 1][1]));
        len += std::sqrt(g.a11 * dx * dx + 2 * g.a12 * dx * dy + g.a22 * dy * dy);
    }
    return len;
}

LoopPolyline make_straight_loop(const SurfaceMetric& m, WindingClass w,
                                std::array<double, 2> base, int nseg) {
    LoopPolyline c;
    c.w = w;
    c.v.resize(nseg + 1);
    const double sx = w.p * m.lx, sy = w.q * m.ly;
    for (int i = 0; i <= nseg; ++i) {
        const double t = static_cast<double>(i) / nseg;
        c.v[i] = {base[0] + t * sx, base[1] + t * sy};
    }
    c.v.back() = {base[0] + sx, base[1] + sy};
    return c;
}

LoopPolyline resample_uniform(const LoopPolyline& c, const SurfaceMetric& m, int nseg) {
    const int ns = c.segments();
    std::vector<double> cum(ns + 1, 0.0);
    for (int i = 0; i < ns; ++i) {
        LoopPolyline seg;
        const double dx = c.v[i + 1][0] - c.v[i][0];
        const double dy = c.v[i + 1][1] - c.v[i][1];
        const Mat2 g = m.metric(0.5 * (c.v[i][0] + c.v[i + 1][0]),
                                0.5 * (c.v[i][1] + c.v[i + 1][1]));
        cum[i + 1] = cum[i] + std::sqrt(g.a11 * dx * dx + 2 * g.a12 * dx * dy + g.a22 * dy * dy);
    }
    const double total = cum[ns];
    LoopPolyline out;
    out.w = c.w;
    out.v.resize(nseg + 1);
    out.v.front() = c.v.front();
    int seg = 0;
    for (int k = 1; k < nseg; ++k) {
        const double target = total * k / nseg;
        while (seg + 1 < ns && cum[seg + 1] < target) ++seg;
        const double t = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
        out.v[k] = {c.v[seg][0] + t * (c.v[seg + 1][0] - c.v[seg][0]),
                    c.v[seg][1] + t * (c.v[seg + 1][1] - c.v[seg][1])};
    }
    out.v.back() = {c.v.front()[0] + c.w.p * m.lx, c.v.front()[1] + c.w.q * m.ly};
    return out;
}

} // namespace rflab::loops
