#include "rflab/hodge/dec.hpp"

#include <cmath>

#include "rflab/errors.hpp"

namespace rflab::hodge {

using geom::dx_centered;
using geom::dy_centered;
using geom::field_max;

namespace {

PeriodResult axis_integral(const OneForm& phi, int wx, int wy, double warn_tol);

} // namespace

DecOperators::DecOperators(ConformalTorusMetric m) : m_(std::move(m)) {
    m_.validate();
    w_ = Field2(m_.grid());
    for (std::size_t i = 0; i < w_.v.size(); ++i) w_.v[i] = std::exp(-2.0 * m_.u.v[i]);
    ux_ = dx_centered(m_.u);
    uy_ = dy_centered(m_.u);
}

OneForm DecOperators::d0(const Field2& f) const {
    OneForm out(f.grid);
    out.p = dx_centered(f);
    out.q = dy_centered(f);
    return out;
}

Field2 DecOperators::d1(const OneForm& phi) const {
    Field2 dq = dx_centered(phi.q);
    const Field2 dp = dy_centered(phi.p);
    for (std::size_t i = 0; i < dq.v.size(); ++i) dq.v[i] -= dp.v[i];
    return dq;
}

Field2 DecOperators::codifferential(const OneForm& phi) const {
    Field2 out = dx_centered(phi.p);
    const Field2 qy = dy_centered(phi.q);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = -w_.v[i] * (out.v[i] + qy.v[i]);
    return out;
}

OneForm DecOperators::codifferential2(const Field2& c) const {
    Field2 cw = c;
    for (std::size_t i = 0; i < cw.v.size(); ++i) cw.v[i] *= w_.v[i];
    OneForm out(c.grid);
    out.p = dy_centered(cw);
    out.q = dx_centered(cw);
    for (double& x : out.q.v) x = -x;
    return out;
}

OneForm DecOperators::hodge_laplacian(const OneForm& phi) const {
    // -(d0 delta1 + delta2 d1) phi
    const Field2 del = codifferential(phi);
    const Field2 curl = d1(phi);
    OneForm grad_del = d0(del);
    OneForm del2_curl = codifferential2(curl);
    OneForm out(phi.grid());
    for (std::size_t i = 0; i < out.p.v.size(); ++i) {
        out.p.v[i] = -(grad_del.p.v[i] + del2_curl.p.v[i]);
        out.q.v[i] = -(grad_del.q.v[i] + del2_curl.q.v[i]);
    }
    return out;
}

Field2 DecOperators::scalar_laplacian(const Field2& f) const {
    Field2 out = codifferential(d0(f));
    for (double& x : out.v) x = -x;
    return out;
}

OneForm DecOperators::rough_laplacian(const OneForm& phi) const {
    // Delta phi_i = g^{jk} (d_j T_{ki} - Gamma^m_{jk} T_{mi} - Gamma^m_{ji} T_{km}),
    // T_{ki} = d_k phi_i - Gamma^m_{ki} phi_m, with the conformal Christoffels
    //   Gxxx = u_x, Gxxy = u_y, Gxyy = -u_x, Gyyy = u_y, Gyxy = u_x, Gyxx = -u_y.
    const auto& g = phi.grid();
    const Field2 px = dx_centered(phi.p), py = dy_centered(phi.p);
    const Field2 qx = dx_centered(phi.q), qy = dy_centered(phi.q);

    Field2 txx(g), txy(g), tyx(g), tyy(g); // T_{k i}: first index derivative dir
    for (std::size_t s = 0; s < g.size(); ++s) {
        const double ux = ux_.v[s], uy = uy_.v[s];
        const double p = phi.p.v[s], q = phi.q.v[s];
        txx.v[s] = px.v[s] - (ux * p + (-uy) * q); // Gamma^m_{xx}: (u_x, -u_y)
        txy.v[s] = qx.v[s] - (uy * p + ux * q);    // Gamma^m_{xy}: (u_y, u_x)
        tyx.v[s] = py.v[s] - (uy * p + ux * q);    // Gamma^m_{yx} = Gamma^m_{xy}
        tyy.v[s] = qy.v[s] - ((-ux) * p + uy * q); // Gamma^m_{yy}: (-u_x, u_y)
    }

    const Field2 txx_x = dx_centered(txx), txy_x = dx_centered(txy);
    const Field2 tyx_y = dy_centered(tyx), tyy_y = dy_centered(tyy);

    OneForm out(g);
    for (std::size_t s = 0; s < g.size(); ++s) {
        const double ux = ux_.v[s], uy = uy_.v[s];
        // Gamma^m_{jk} as (x, y) pairs
        const double G_xx_x = ux, G_xx_y = -uy;
        const double G_xy_x = uy, G_xy_y = ux; // = Gamma^m_{yx}
        const double G_yy_x = -ux, G_yy_y = uy;

        // nabla_j T_{ki} = d_j T_{ki} - Gamma^m_{jk} T_{mi} - Gamma^m_{ji} T_{km}
        const double nx_txx = txx_x.v[s] - (G_xx_x * txx.v[s] + G_xx_y * tyx.v[s])
                              - (G_xx_x * txx.v[s] + G_xx_y * txy.v[s]);
        const double ny_tyx = tyx_y.v[s] - (G_yy_x * txx.v[s] + G_yy_y * tyx.v[s])
                              - (G_xy_x * tyx.v[s] + G_xy_y * tyy.v[s]);
        const double nx_txy = txy_x.v[s] - (G_xx_x * txy.v[s] + G_xx_y * tyy.v[s])
                              - (G_xy_x * txx.v[s] + G_xy_y * txy.v[s]);
        const double ny_tyy = tyy_y.v[s] - (G_yy_x * txy.v[s] + G_yy_y * tyy.v[s])
                              - (G_yy_x * tyx.v[s] + G_yy_y * tyy.v[s]);

        out.p.v[s] = w_.v[s] * (nx_txx + ny_tyx);
        out.q.v[s] = w_.v[s] * (nx_txy + ny_tyy);
    }
    return out;
}

double DecOperators::ip0(const Field2& a, const Field2& b) const {
    const double cell = a.grid.hx() * a.grid.hy();
    double s = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i)
        s += a.v[i] * b.v[i] * std::exp(2.0 * m_.u.v[i]);
    return s * cell;
}

double DecOperators::ip1(const OneForm& a, const OneForm& b) const {
    // conformal invariance in 2-D: the metric weights cancel
    const double cell = a.grid().hx() * a.grid().hy();
    double s = 0;
    for (std::size_t i = 0; i < a.p.v.size(); ++i)
        s += a.p.v[i] * b.p.v[i] + a.q.v[i] * b.q.v[i];
    return s * cell;
}

double DecOperators::ip2(const Field2& a, const Field2& b) const {
    const double cell = a.grid.hx() * a.grid.hy();
    double s = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i] * w_.v[i];
    return s * cell;
}

double DecOperators::heat_dt_bound() const {
    const auto& g = m_.grid();
    const double rho = field_max(w_) * std::pow(1.0 / g.hx() + 1.0 / g.hy(), 2);
    return 2.5 / rho;
}

OneForm step_form_heat(const OneForm& phi, const ConformalTorusMetric& m, double dt) {
    DecOperators dec(m);
    const double bound = dec.heat_dt_bound();
    if (dt > bound) throw StepRejected(dt, bound);

    auto axpy = [](const OneForm& base, double a, const OneForm& dir) {
        OneForm out = base;
        for (std::size_t i = 0; i < out.p.v.size(); ++i) {
            out.p.v[i] += a * dir.p.v[i];
            out.q.v[i] += a * dir.q.v[i];
        }
        return out;
    };
    const OneForm k1 = dec.hodge_laplacian(phi);
    const OneForm k2 = dec.hodge_laplacian(axpy(phi, 0.5 * dt, k1));
    const OneForm k3 = dec.hodge_laplacian(axpy(phi, 0.5 * dt, k2));
    const OneForm k4 = dec.hodge_laplacian(axpy(phi, dt, k3));
    OneForm out = phi;
    for (std::size_t i = 0; i < out.p.v.size(); ++i) {
        out.p.v[i] += dt / 6.0 * (k1.p.v[i] + 2 * k2.p.v[i] + 2 * k3.p.v[i] + k4.p.v[i]);
        out.q.v[i] += dt / 6.0 * (k1.q.v[i] + 2 * k2.q.v[i] + 2 * k3.q.v[i] + k4.q.v[i]);
    }
    return out;
}

PeriodResult period_detail(const OneForm& phi, int wx, int wy, double closed_warn_tol) {
    return axis_integral(phi, wx, wy, closed_warn_tol);
}

CohomologyClass make_class(const PeriodicGrid2& g, double period_x, double period_y) {
    CohomologyClass c;
    c.base = OneForm(g);
    for (double& x : c.base.p.v) x = period_x / g.lx;
    for (double& x : c.base.q.v) x = period_y / g.ly;
    c.periods = {period_x, period_y};
    return c;
}

namespace {

PeriodResult axis_integral(const OneForm& phi, int wx, int wy, double warn_tol) {
    const auto& g = phi.grid();
    PeriodResult out;

    // closedness
    const Field2 qx = dx_centered(phi.q);
    const Field2 py = dy_centered(phi.p);
    for (std::size_t i = 0; i < qx.v.size(); ++i)
        out.closedness_sup = std::max(out.closedness_sup, std::fabs(qx.v[i] - py.v[i]));

    // row integrals of p, column integrals of q
    double row0 = 0, row_min = 0, row_max = 0;
    for (int j = 0; j < g.ny; ++j) {
        double s = 0;
        for (int i = 0; i < g.nx; ++i) s += phi.p.raw(i, j);
        s *= g.hx();
        if (j == 0) row0 = row_min = row_max = s;
        row_min = std::min(row_min, s);
        row_max = std::max(row_max, s);
    }
    double col0 = 0, col_min = 0, col_max = 0;
    for (int i = 0; i < g.nx; ++i) {
        double s = 0;
        for (int j = 0; j < g.ny; ++j) s += phi.q.raw(i, j);
        s *= g.hy();
        if (i == 0) col0 = col_min = col_max = s;
        col_min = std::min(col_min, s);
        col_max = std::max(col_max, s);
    }
    out.value = wx * row0 + wy * col0;
    out.spread = std::fabs(wx) * (row_max - row_min) + std::fabs(wy) * (col_max - col_min);
    out.warned = out.closedness_sup > warn_tol;
    return out;
}

} // namespace

} // namespace rflab::hodge
