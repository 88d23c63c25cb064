#include "rflab/flow/stepping.hpp"

#include <cmath>

#include "rflab/errors.hpp"
#include "rflab/geom/grid.hpp"

namespace rflab::flow {

using geom::Field2;

namespace detail {

Field2 torus_rhs(const Field2& u) {
    Field2 out = geom::laplacian5(u);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= std::exp(-2.0 * u.v[i]);
    return out;
}

void warped_rhs(const WarpedMetric& m, std::vector<double>& dphi, std::vector<double>& dpsi) {
    const int nx = m.nx;
    const double h = m.hx();
    dphi.resize(nx);
    dpsi.resize(nx);
    for (int i = 0; i < nx; ++i) {
        const int ip = i + 1 == nx ? 0 : i + 1;
        const int im = i == 0 ? nx - 1 : i - 1;
        const double phi = m.phi[i], psi = m.psi[i];
        const double psi_x = (m.psi[ip] - m.psi[im]) / (2 * h);
        const double psi_xx = (m.psi[ip] - 2 * psi + m.psi[im]) / (h * h);
        const double phi_x = (m.phi[ip] - m.phi[im]) / (2 * h);
        const double psi_s = psi_x / phi;
        const double psi_ss = psi_xx / (phi * phi) - psi_x * phi_x / (phi * phi * phi);
        dphi[i] = (m.n - 1) * phi * psi_ss / psi;
        dpsi[i] = psi_ss - (m.n - 2) * (1.0 - psi_s * psi_s) / psi;
    }
}

} // namespace detail

double torus_dt_bound(const ConformalTorusMetric& m) {
    const auto& g = m.grid();
    const double h = std::min(g.hx(), g.hy());
    double wmax = 0;
    for (double u : m.u.v) wmax = std::max(wmax, std::exp(-2.0 * u));
    return h * h / (4.0 * wmax);
}

double warped_dt_bound(const WarpedMetric& m) {
    const double h = m.hx();
    double phimin = m.phi[0], psimin = m.psi[0];
    for (double x : m.phi) phimin = std::min(phimin, x);
    for (double x : m.psi) psimin = std::min(psimin, x);
    double bound = h * h * phimin * phimin / 2.0;
    bound = std::min(bound, psimin * psimin / (m.n - 2));
    // phi-equation reaction rate (n-1)|psi_ss|/psi
    std::vector<double> dphi, dpsi;
    detail::warped_rhs(m, dphi, dpsi);
    double rate = 0;
    for (int i = 0; i < m.nx; ++i) rate = std::max(rate, std::fabs(dphi[i] / m.phi[i]));
    if (rate > 0) bound = std::min(bound, 1.0 / rate);
    return bound;
}

ConformalTorusMetric step_torus_flow(const ConformalTorusMetric& m, double dt) {
    m.validate();
    const double bound = torus_dt_bound(m);
    if (dt > bound) throw StepRejected(dt, bound);

    auto shifted = [&](const Field2& base, double a, const Field2& dir) {
        Field2 out = base;
        for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += a * dir.v[i];
        return out;
    };
    const Field2 k1 = detail::torus_rhs(m.u);
    const Field2 k2 = detail::torus_rhs(shifted(m.u, 0.5 * dt, k1));
    const Field2 k3 = detail::torus_rhs(shifted(m.u, 0.5 * dt, k2));
    const Field2 k4 = detail::torus_rhs(shifted(m.u, dt, k3));
    ConformalTorusMetric out = m;
    for (std::size_t i = 0; i < out.u.v.size(); ++i)
        out.u.v[i] += dt / 6.0 * (k1.v[i] + 2 * k2.v[i] + 2 * k3.v[i] + k4.v[i]);
    return out;
}

WarpedMetric step_warped_flow(const WarpedMetric& m, double dt) {
    m.validate();
    const double bound = warped_dt_bound(m);
    if (dt > bound) throw StepRejected(dt, bound);

    const int nx = m.nx;
    auto shifted = [&](const WarpedMetric& base, double a, const std::vector<double>& dphi,
                       const std::vector<double>& dpsi) {
        WarpedMetric out = base;
        for (int i = 0; i < nx; ++i) {
            out.phi[i] += a * dphi[i];
            out.psi[i] += a * dpsi[i];
        }
        return out;
    };
    std::vector<double> k1p, k1s, k2p, k2s, k3p, k3s, k4p, k4s;
    detail::warped_rhs(m, k1p, k1s);
    detail::warped_rhs(shifted(m, 0.5 * dt, k1p, k1s), k2p, k2s);
    detail::warped_rhs(shifted(m, 0.5 * dt, k2p, k2s), k3p, k3s);
    detail::warped_rhs(shifted(m, dt, k3p, k3s), k4p, k4s);
    WarpedMetric out = m;
    for (int i = 0; i < nx; ++i) {
        out.phi[i] += dt / 6.0 * (k1p[i] + 2 * k2p[i] + 2 * k3p[i] + k4p[i]);
        out.psi[i] += dt / 6.0 * (k1s[i] + 2 * k2s[i] + 2 * k3s[i] + k4s[i]);
    }
    return out;
}

} // namespace rflab::flow
