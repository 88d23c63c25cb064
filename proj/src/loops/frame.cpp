#include "rflab/loops/frame.hpp"

#include <cmath>
#include <stdexcept>

#include "rflab/loops/shorten.hpp"

namespace rflab::loops {

namespace {

struct Vec2 {
    double x = 0, y = 0;
};

double gdot(const Mat2& g, const Vec2& a, const Vec2& b) {
    return g.a11 * a.x * b.x + g.a12 * (a.x * b.y + a.y * b.x) + g.a22 * a.y * b.y;
}

// oriented unit normal: n^a = eps^{ab} g_bc V^c / sqrt(det g)
Vec2 unit_normal(const Mat2& g, const Vec2& v) {
    const double sd = std::sqrt(g.det());
    Vec2 n{(g.a12 * v.x + g.a22 * v.y) / sd, -(g.a11 * v.x + g.a12 * v.y) / sd};
    return n;
}

} // namespace

GeodesicFrame build_frame(const LoopPolyline& geodesic, const SurfaceMetric& m,
                          double residual_tol) {
    const double res = geodesic_residual(geodesic, m);
    if (res > residual_tol)
        throw std::invalid_argument("build_frame: input is not a geodesic (residual " +
                                    std::to_string(res) + ")");
    const int n = geodesic.segments();
    GeodesicFrame fr;
    fr.ambient_n = m.ambient_n;
    fr.analytic_parallel = std::max(0, m.ambient_n - 2);
    fr.tangent.resize(n);
    fr.normal.resize(n + 1);

    // unit tangents and arclength
    std::vector<double> seg_len(n);
    for (int i = 0; i < n; ++i) {
        const double dx = geodesic.v[i + 1][0] - geodesic.v[i][0];
        const double dy = geodesic.v[i + 1][1] - geodesic.v[i][1];
        const Mat2 g = m.metric(0.5 * (geodesic.v[i][0] + geodesic.v[i + 1][0]),
                                0.5 * (geodesic.v[i][1] + geodesic.v[i + 1][1]));
        const double len = std::sqrt(g.a11 * dx * dx + 2 * g.a12 * dx * dy + g.a22 * dy * dy);
        seg_len[i] = len;
        fr.length += len;
        fr.tangent[i] = {dx / len, dy / len};
    }

    // transport w along segments: dw^a/dtau = -Gamma^a_{bc} d^b w^c (d = segment delta)
    std::vector<Vec2> transported(n + 1);
    {
        const Mat2 g0 = m.metric(geodesic.v[0][0], geodesic.v[0][1]);
        transported[0] = unit_normal(g0, {fr.tangent[0][0], fr.tangent[0][1]});
    }
    auto rhs = [&](double x, double y, const Vec2& d, const Vec2& w) {
        double gamma[2][2][2];
        m.christoffel(x, y, gamma);
        Vec2 out;
        out.x = -(gamma[0][0][0] * d.x * w.x + gamma[0][0][1] * d.x * w.y +
                  gamma[0][1][0] * d.y * w.x + gamma[0][1][1] * d.y * w.y);
        out.y = -(gamma[1][0][0] * d.x * w.x + gamma[1][0][1] * d.x * w.y +
                  gamma[1][1][0] * d.y * w.x + gamma[1][1][1] * d.y * w.y);
        return out;
    };
    for (int i = 0; i < n; ++i) {
        const Vec2 a{geodesic.v[i][0], geodesic.v[i][1]};
        const Vec2 d{geodesic.v[i + 1][0] - a.x, geodesic.v[i + 1][1] - a.y};
        Vec2 w = transported[i];
        // one RK4 step over the segment
        const Vec2 k1 = rhs(a.x, a.y, d, w);
        const Vec2 k2 = rhs(a.x + 0.5 * d.x, a.y + 0.5 * d.y, d,
                            {w.x + 0.5 * k1.x, w.y + 0.5 * k1.y});
        const Vec2 k3 = rhs(a.x + 0.5 * d.x, a.y + 0.5 * d.y, d,
                            {w.x + 0.5 * k2.x, w.y + 0.5 * k2.y});
        const Vec2 k4 = rhs(a.x + d.x, a.y + d.y, d, {w.x + k3.x, w.y + k3.y});
        w.x += (k1.x + 2 * k2.x + 2 * k3.x + k4.x) / 6.0;
        w.y += (k1.y + 2 * k2.y + 2 * k3.y + k4.y) / 6.0;
        // renormalize against norm drift
        const Mat2 g = m.metric(geodesic.v[i + 1][0], geodesic.v[i + 1][1]);
        const double nn = std::sqrt(gdot(g, w, w));
        transported[i + 1] = {w.x / nn, w.y / nn};
    }

    // holonomy defect: signed angle from w(0) to w(L) at the base point
    {
        const Mat2 g = m.metric(geodesic.v[0][0], geodesic.v[0][1]);
        const Vec2 a = transported[0], b = transported[n];
        const double cosang = gdot(g, a, b);
        const double sinang = std::sqrt(g.det()) * (a.x * b.y - a.y * b.x);
        fr.holonomy_angle = std::atan2(sinang, cosang);
    }
    fr.rotation_rate = std::fabs(fr.holonomy_angle) / fr.length;

    // distribute the defect at constant rate: rotate back by angle * s/L
    double s = 0;
    for (int i = 0; i <= n; ++i) {
        if (i > 0) s += seg_len[i - 1];
        const double ang = -fr.holonomy_angle * s / fr.length;
        const int vi = i % n;
        const Mat2 g = m.metric(geodesic.v[vi][0], geodesic.v[vi][1]);
        const Vec2 w = transported[i];
        const Vec2 wperp = unit_normal(g, w); // 90-degree rotation of w
        fr.normal[i] = {std::cos(ang) * w.x + std::sin(ang) * wperp.x,
                        std::cos(ang) * w.y + std::sin(ang) * wperp.y};
    }
    return fr;
}

} // namespace rflab::loops
