#include "rflab/loops/stability.hpp"

#include <cmath>
#include <stdexcept>

namespace rflab::loops {

namespace {

// orthonormal components (ca, cb) of the unit tangent along the coordinate
// directions at a midpoint (diagonal metrics on both families)
void tangent_components(const Mat2& g, const std::array<double, 2>& v, double& ca, double& cb) {
    const double e1 = std::sqrt(g.a11) * v[0];
    const double e2 = std::sqrt(g.a22) * v[1];
    const double nn = std::hypot(e1, e2);
    ca = e1 / nn;
    cb = e2 / nn;
}

} // namespace

double stability_integral(const LoopPolyline& geod, const GeodesicFrame& frame,
                          const SurfaceMetric& m,
                          const std::vector<std::vector<double>>& comps) {
    const int n = geod.segments();
    const int dirs = m.ambient_n - 1;
    if (static_cast<int>(comps.size()) != dirs)
        throw std::invalid_argument("stability_integral: need ambient_n - 1 component rows");
    for (const auto& row : comps)
        if (static_cast<int>(row.size()) != n + 1)
            throw std::invalid_argument("stability_integral: component row size mismatch");

    double total = 0;
    for (int i = 0; i < n; ++i) {
        const double mx = 0.5 * (geod.v[i][0] + geod.v[i + 1][0]);
        const double my = 0.5 * (geod.v[i][1] + geod.v[i + 1][1]);
        const Mat2 g = m.metric(mx, my);
        const double dx = geod.v[i + 1][0] - geod.v[i][0];
        const double dy = geod.v[i + 1][1] - geod.v[i][1];
        const double ds = std::sqrt(g.a11 * dx * dx + 2 * g.a12 * dx * dy + g.a22 * dy * dy);

        double ca, cb;
        tangent_components(g, frame.tangent[i], ca, cb);

        double grad2 = 0, curv = 0;
        for (int d = 0; d < dirs; ++d) {
            const double xm = 0.5 * (comps[d][i] + comps[d][i + 1]);
            const double xp = (comps[d][i + 1] - comps[d][i]) / ds;
            const double rot = (d == 0) ? frame.rotation_rate : 0.0;
            grad2 += xp * xp + rot * rot * xm * xm;
            const double k = (d == 0)
                                 ? m.k_surface(mx, my)
                                 : ca * ca * m.k_surface(mx, my) + cb * cb * m.k_sphere(mx, my);
            curv += k * xm * xm;
        }
        total += (grad2 - curv) * ds;
    }
    return total;
}

double length_derivative(const LoopPolyline& geod, const SurfaceMetric& m) {
    const int n = geod.segments();
    double total = 0;
    for (int i = 0; i < n; ++i) {
        const double mx = 0.5 * (geod.v[i][0] + geod.v[i + 1][0]);
        const double my = 0.5 * (geod.v[i][1] + geod.v[i + 1][1]);
        const Mat2 g = m.metric(mx, my);
        const double dx = geod.v[i + 1][0] - geod.v[i][0];
        const double dy = geod.v[i + 1][1] - geod.v[i][1];
        const double ds = std::sqrt(g.a11 * dx * dx + 2 * g.a12 * dx * dy + g.a22 * dy * dy);
        double ca, cb;
        std::array<double, 2> v{dx, dy};
        tangent_components(g, v, ca, cb);
        total += m.ricci_vv(mx, my, ca, cb) * ds;
    }
    return -total;
}

} // namespace rflab::loops
