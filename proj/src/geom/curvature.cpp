#include "rflab/geom/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace rflab::geom {

CurvatureFields torus_curvature(const ConformalTorusMetric& m) {
    m.validate();
    const auto& g = m.grid();
    CurvatureFields out;
    out.k = Field2(g);
    out.r.resize(g.size());

    const Field2 lap = laplacian5(m.u);
    double kmin = 0, kmax = 0, sup = 0, kda = 0, abskda = 0;
    bool first = true;
    const double cell = g.hx() * g.hy();
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const double e2u = std::exp(2.0 * m.u.v[idx]);
        const double k = -lap.v[idx] / e2u;
        out.k.v[idx] = k;
        out.r[idx] = 2.0 * k;
        if (first) {
            kmin = kmax = k;
            first = false;
        } else {
            kmin = std::min(kmin, k);
            kmax = std::max(kmax, k);
        }
        sup = std::max(sup, std::fabs(k));
        kda += k * e2u * cell;
        abskda += std::fabs(k) * e2u * cell;
    }
    out.r_min = 2.0 * kmin;
    out.r_max = 2.0 * kmax;
    out.sup_rm = sup;
    out.total_k_da = kda;
    out.total_abs_k_da = abskda;
    return out;
}

CurvatureFields warped_curvature(const WarpedMetric& m) {
    m.validate();
    const int n = m.n;
    const int nx = m.nx;
    const double h = m.hx();
    CurvatureFields out;
    out.rc_ss.resize(nx);
    out.rc_sph.resize(nx);
    out.k_rad.resize(nx);
    out.k_sph.resize(nx);
    out.r.resize(nx);

    double rmin = 0, rmax = 0, sup = 0;
    for (int i = 0; i < nx; ++i) {
        const int ip = i + 1 == nx ? 0 : i + 1;
        const int im = i == 0 ? nx - 1 : i - 1;
        const double phi = m.phi[i];
        const double psi = m.psi[i];
        const double psi_x = (m.psi[ip] - m.psi[im]) / (2 * h);
        const double psi_xx = (m.psi[ip] - 2 * psi + m.psi[im]) / (h * h);
        const double phi_x = (m.phi[ip] - m.phi[im]) / (2 * h);
        const double psi_s = psi_x / phi;
        const double psi_ss = psi_xx / (phi * phi) - psi_x * phi_x / (phi * phi * phi);

        const double k_rad = -psi_ss / psi;
        const double k_sph = (1.0 - psi_s * psi_s) / (psi * psi);
        out.k_rad[i] = k_rad;
        out.k_sph[i] = k_sph;
        out.rc_ss[i] = (n - 1) * phi * phi * k_rad;
        out.rc_sph[i] = psi * psi * (k_rad + (n - 2) * k_sph);
        const double r = 2.0 * (n - 1) * k_rad + (n - 1.0) * (n - 2.0) * k_sph;
        out.r[i] = r;
        if (i == 0) {
            rmin = rmax = r;
        } else {
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
        sup = std::max(sup, std::max(std::fabs(k_rad), std::fabs(k_sph)));
    }
    out.r_min = rmin;
    out.r_max = rmax;
    out.sup_rm = sup;
    return out;
}

} // namespace rflab::geom
