#include "rflab/loops/surface.hpp"

#include <cmath>
#include <stdexcept>

namespace rflab::loops {

namespace {

// Catmull-Rom weights and derivatives for local coordinate s in [0, 1).
inline void cr_weights(double s, double w[4], double dw[4]) {
    const double s2 = s * s, s3 = s2 * s;
    w[0] = 0.5 * (-s3 + 2 * s2 - s);
    w[1] = 0.5 * (3 * s3 - 5 * s2 + 2);
    w[2] = 0.5 * (-3 * s3 + 4 * s2 + s);
    w[3] = 0.5 * (s3 - s2);
    dw[0] = 0.5 * (-3 * s2 + 4 * s - 1);
    dw[1] = 0.5 * (9 * s2 - 10 * s);
    dw[2] = 0.5 * (-9 * s2 + 8 * s + 1);
    dw[3] = 0.5 * (3 * s2 - 2 * s);
}

inline int wrap(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

} // namespace

CrInterp::CrInterp(int nx, int ny, double lx, double ly, std::vector<double> nodal)
    : nx_(nx), ny_(ny), hx_(lx / nx), hy_(ly / ny), v_(std::move(nodal)) {
    if (static_cast<int>(v_.size()) != nx * ny) throw std::invalid_argument("CrInterp: size");
}

double CrInterp::eval(double x, double y) const {
    double f, fx, fy;
    jet(x, y, f, fx, fy);
    return f;
}

void CrInterp::jet(double x, double y, double& f, double& fx, double& fy) const {
    const double u = x / hx_, w = y / hy_;
    const double fu = std::floor(u), fw = std::floor(w);
    const int i0 = static_cast<int>(fu), j0 = static_cast<int>(fw);
    const double su = u - fu, sw = w - fw;
    double wx[4], dwx[4], wy[4], dwy[4];
    cr_weights(su, wx, dwx);
    cr_weights(sw, wy, dwy);
    f = fx = fy = 0;
    for (int b = 0; b < 4; ++b) {
        const int j = wrap(j0 + b - 1, ny_);
        double row = 0, drow = 0;
        for (int a = 0; a < 4; ++a) {
            const int i = wrap(i0 + a - 1, nx_);
            const double val = v_[static_cast<std::size_t>(j) * nx_ + i];
            row += wx[a] * val;
            drow += dwx[a] * val;
        }
        f += wy[b] * row;
        fx += wy[b] * drow;
        fy += dwy[b] * row;
    }
    fx /= hx_;
    fy /= hy_;
}

// The diagonal components are interpolated in log space: positivity survives
// interpolation even when the nodal values span many orders of magnitude
// (near-pinch psi^2 undershoots to negative values otherwise).
Mat2 SurfaceMetric::metric(double x, double y) const {
    Mat2 g;
    g.a11 = std::exp(g11_.eval(x, y));
    g.a22 = std::exp(g22_.eval(x, y));
    g.a12 = has_g12_ ? g12_.eval(x, y) : 0.0;
    return g;
}

void SurfaceMetric::metric_jet(double x, double y, Mat2& g, Mat2& gx, Mat2& gy) const {
    double l, lx_, ly_;
    g11_.jet(x, y, l, lx_, ly_);
    g.a11 = std::exp(l);
    gx.a11 = g.a11 * lx_;
    gy.a11 = g.a11 * ly_;
    g22_.jet(x, y, l, lx_, ly_);
    g.a22 = std::exp(l);
    gx.a22 = g.a22 * lx_;
    gy.a22 = g.a22 * ly_;
    if (has_g12_) {
        g12_.jet(x, y, g.a12, gx.a12, gy.a12);
    } else {
        g.a12 = gx.a12 = gy.a12 = 0;
    }
}

void SurfaceMetric::christoffel(double x, double y, double gamma[2][2][2]) const {
    Mat2 g, gx, gy;
    metric_jet(x, y, g, gx, gy);
    const double det = g.det();
    const double i11 = g.a22 / det, i22 = g.a11 / det, i12 = -g.a12 / det;
    // dg[c][a][b] = d_c g_ab
    const double dg[2][2][2] = {{{gx.a11, gx.a12}, {gx.a12, gx.a22}},
                                {{gy.a11, gy.a12}, {gy.a12, gy.a22}}};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                double s = 0;
                for (int d = 0; d < 2; ++d) {
                    const double inv = (a == 0) ? (d == 0 ? i11 : i12) : (d == 0 ? i12 : i22);
                    s += inv * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
                }
                gamma[a][b][c] = 0.5 * s;
            }
}

double SurfaceMetric::k_surface(double x, double y) const { return krad_.eval(x, y); }

double SurfaceMetric::k_sphere(double x, double y) const {
    return warped_family ? ksph_.eval(x, y) : 0.0;
}

double SurfaceMetric::ricci_vv(double x, double y, double ca, double cb) const {
    if (!warped_family) return krad_.eval(x, y); // Rc = K g on a surface
    const double krad = krad_.eval(x, y);
    const double ksph = ksph_.eval(x, y);
    const int n = ambient_n;
    return ca * ca * (n - 1) * krad + cb * cb * (krad + (n - 2) * ksph);
}

SurfaceMetric SurfaceMetric::from_torus(const geom::ConformalTorusMetric& m) {
    const auto& gr = m.grid();
    SurfaceMetric s;
    s.lx = gr.lx;
    s.ly = gr.ly;
    s.nx = gr.nx;
    s.ny = gr.ny;
    s.ambient_n = 2;
    s.warped_family = false;
    std::vector<double> log_g(gr.size());
    for (std::size_t i = 0; i < log_g.size(); ++i) log_g[i] = 2.0 * m.u.v[i];
    s.g11_ = CrInterp(gr.nx, gr.ny, gr.lx, gr.ly, log_g);
    s.g22_ = CrInterp(gr.nx, gr.ny, gr.lx, gr.ly, std::move(log_g));
    s.has_g12_ = false;
    const auto curv = geom::torus_curvature(m);
    s.krad_ = CrInterp(gr.nx, gr.ny, gr.lx, gr.ly, curv.k.v);
    return s;
}

SurfaceMetric SurfaceMetric::from_warped(const geom::WarpedMetric& m, int ntheta) {
    SurfaceMetric s;
    s.lx = m.period;
    s.ly = 2 * 3.14159265358979323846;
    s.nx = m.nx;
    s.ny = ntheta;
    s.ambient_n = m.n;
    s.warped_family = true;
    const auto curv = geom::warped_curvature(m);
    auto replicate = [&](auto value_at) {
        std::vector<double> out(static_cast<std::size_t>(m.nx) * ntheta);
        for (int j = 0; j < ntheta; ++j)
            for (int i = 0; i < m.nx; ++i) out[static_cast<std::size_t>(j) * m.nx + i] = value_at(i);
        return out;
    };
    s.g11_ = CrInterp(m.nx, ntheta, s.lx, s.ly,
                      replicate([&](int i) { return 2.0 * std::log(m.phi[i]); }));
    s.g22_ = CrInterp(m.nx, ntheta, s.lx, s.ly,
                      replicate([&](int i) { return 2.0 * std::log(m.psi[i]); }));
    s.krad_ = CrInterp(m.nx, ntheta, s.lx, s.ly, replicate([&](int i) { return curv.k_rad[i]; }));
    s.ksph_ = CrInterp(m.nx, ntheta, s.lx, s.ly, replicate([&](int i) { return curv.k_sph[i]; }));
    s.has_g12_ = false;
    return s;
}

} // namespace rflab::loops
