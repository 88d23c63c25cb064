#include "rflab/flow/run.hpp"

#include <cmath>
#include <stdexcept>

#include "rflab/flow/stepping.hpp"
#include "rflab/geom/curvature.hpp"
#include "rflab/geom/grid.hpp"
#include "rflab/hodge/dec.hpp"
#include "rflab/hodge/warped_forms.hpp"

namespace rflab::flow {

using geom::Field2;

std::vector<std::string> torus_diag_columns(bool has_form) {
    std::vector<std::string> c{"t", "r_min", "r_max", "sup_rm", "area"};
    if (has_form) {
        c.push_back("form_sup");
        c.push_back("period_x");
        c.push_back("period_y");
    }
    return c;
}

std::vector<std::string> warped_diag_columns(bool has_form) {
    std::vector<std::string> c{"t", "r_min", "r_max", "sup_rm", "s1_length", "min_psi"};
    if (has_form) {
        c.push_back("form_sup");
        c.push_back("form_period");
    }
    return c;
}

std::vector<double> torus_diag_row(const TorusSnapshot& s, bool has_form) {
    const auto curv = geom::torus_curvature(s.metric);
    std::vector<double> row{s.t, curv.r_min, curv.r_max, curv.sup_rm, s.metric.total_area()};
    if (has_form) {
        row.push_back(hodge::sup_norm(s.form, s.metric));
        row.push_back(hodge::period(s.form, 1, 0));
        row.push_back(hodge::period(s.form, 0, 1));
    }
    return row;
}

std::vector<double> warped_diag_row(const WarpedSnapshot& s, bool has_form) {
    const auto curv = geom::warped_curvature(s.metric);
    std::vector<double> row{s.t, curv.r_min, curv.r_max, curv.sup_rm, s.metric.s1_length(),
                            s.metric.min_psi()};
    if (has_form) {
        row.push_back(hodge::warped_sup_norm(s.form, s.metric));
        row.push_back(hodge::warped_period(s.form, s.metric));
    }
    return row;
}

double effective_floor(const FlowConfig& cfg, const geom::WarpedMetric& m0) {
    if (cfg.singularity_floor > 0) return cfg.singularity_floor;
    return 1e-3 * m0.min_psi();
}

namespace {

// Linear extrapolation of min_psi^2 to zero over the last few samples.
double extrapolate_t_num(const DiagTable& diag, double t_final) {
    const int tc = diag.col("t");
    const int pc = diag.col("min_psi");
    if (tc < 0 || pc < 0 || diag.rows.size() < 3) return t_final;
    const std::size_t m = std::min<std::size_t>(8, diag.rows.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = diag.rows.size() - m; i < diag.rows.size(); ++i) {
        const double x = diag.rows[i][tc];
        const double y = diag.rows[i][pc] * diag.rows[i][pc];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    if (denom == 0) return t_final;
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;
    if (slope >= 0) return t_final;
    return std::max(t_final, -intercept / slope);
}

struct TorusState {
    Field2 u;
    Field2 p, q; // form components
    Field2 f;    // potential
};

void torus_coupled_rhs(const TorusState& s, bool has_form, const Field2& phi0_p,
                       const Field2& phi0_q, TorusState& out) {
    out.u = detail::torus_rhs(s.u);
    if (!has_form) return;
    geom::ConformalTorusMetric m;
    m.u = s.u;
    hodge::DecOperators dec(m);
    hodge::OneForm phi;
    phi.p = s.p;
    phi.q = s.q;
    const auto lap = dec.hodge_laplacian(phi);
    out.p = lap.p;
    out.q = lap.q;
    hodge::OneForm phi0;
    phi0.p = phi0_p;
    phi0.q = phi0_q;
    out.f = dec.scalar_laplacian(s.f);
    const Field2 del0 = dec.codifferential(phi0);
    for (std::size_t i = 0; i < out.f.v.size(); ++i) out.f.v[i] -= del0.v[i];
}

struct WarpedState {
    geom::WarpedMetric m;
    std::vector<double> a; // form coefficient
    std::vector<double> f; // potential
};

void warped_coupled_rhs(const WarpedState& s, bool has_form, const std::vector<double>& a0,
                        std::vector<double>& dphi, std::vector<double>& dpsi,
                        std::vector<double>& da, std::vector<double>& df) {
    detail::warped_rhs(s.m, dphi, dpsi);
    if (!has_form) return;
    hodge::WarpedFormOps ops(s.m);
    da = ops.laplacian(s.a);
    df = ops.scalar_laplacian(s.f);
    const auto del0 = ops.codifferential(a0);
    for (std::size_t i = 0; i < df.size(); ++i) df[i] -= del0[i];
}

} // namespace

FlowTrace run_torus_flow(const geom::ConformalTorusMetric& m0, const FlowConfig& cfg) {
    return run_torus_flow(m0, hodge::OneForm{}, cfg);
}

FlowTrace run_torus_flow(const geom::ConformalTorusMetric& m0, const hodge::OneForm& phi0,
                         const FlowConfig& cfg) {
    if (!cfg.valid()) throw std::invalid_argument("run_torus_flow: bad config");
    m0.validate();
    const bool has_form = !phi0.p.v.empty();
    const auto& grid = m0.grid();

    FlowTrace tr;
    tr.family = Family::Torus;
    tr.cfg = cfg;
    tr.has_form = has_form;
    tr.diag.columns = torus_diag_columns(has_form);

    TorusState st{m0.u, Field2(grid), Field2(grid), Field2(grid)};
    if (has_form) {
        st.p = phi0.p;
        st.q = phi0.q;
    }

    auto snapshot = [&](double t) {
        TorusSnapshot s;
        s.t = t;
        s.metric.u = st.u;
        if (has_form) {
            s.form.p = st.p;
            s.form.q = st.q;
            s.potential = st.f;
            hodge::normalize_mean_zero(s.potential);
        }
        if (!s.metric.u.finite()) throw std::runtime_error("run_torus_flow: non-finite state");
        tr.diag.rows.push_back(torus_diag_row(s, has_form));
        tr.torus.push_back(std::move(s));
    };

    double t = 0;
    snapshot(t);
    long step = 0, last_snap = 0;
    TorusState k1, k2, k3, k4, tmp;
    while (t < cfg.t_end - 1e-15) {
        geom::ConformalTorusMetric cur;
        cur.u = st.u;
        double bound = cfg.cfl_safety * torus_dt_bound(cur);
        if (has_form) bound = std::min(bound, cfg.cfl_safety * hodge::DecOperators(cur).heat_dt_bound());
        const double dt = std::min({cfg.dt_init, bound, cfg.t_end - t});

        auto add = [&](const TorusState& base, double a, const TorusState& dir, TorusState& out) {
            out.u = base.u;
            for (std::size_t i = 0; i < out.u.v.size(); ++i) out.u.v[i] += a * dir.u.v[i];
            if (has_form) {
                out.p = base.p;
                out.q = base.q;
                out.f = base.f;
                for (std::size_t i = 0; i < out.p.v.size(); ++i) {
                    out.p.v[i] += a * dir.p.v[i];
                    out.q.v[i] += a * dir.q.v[i];
                    out.f.v[i] += a * dir.f.v[i];
                }
            }
        };
        torus_coupled_rhs(st, has_form, phi0.p, phi0.q, k1);
        add(st, 0.5 * dt, k1, tmp);
        torus_coupled_rhs(tmp, has_form, phi0.p, phi0.q, k2);
        add(st, 0.5 * dt, k2, tmp);
        torus_coupled_rhs(tmp, has_form, phi0.p, phi0.q, k3);
        add(st, dt, k3, tmp);
        torus_coupled_rhs(tmp, has_form, phi0.p, phi0.q, k4);
        for (std::size_t i = 0; i < st.u.v.size(); ++i)
            st.u.v[i] += dt / 6.0 * (k1.u.v[i] + 2 * k2.u.v[i] + 2 * k3.u.v[i] + k4.u.v[i]);
        if (has_form)
            for (std::size_t i = 0; i < st.p.v.size(); ++i) {
                st.p.v[i] += dt / 6.0 * (k1.p.v[i] + 2 * k2.p.v[i] + 2 * k3.p.v[i] + k4.p.v[i]);
                st.q.v[i] += dt / 6.0 * (k1.q.v[i] + 2 * k2.q.v[i] + 2 * k3.q.v[i] + k4.q.v[i]);
                st.f.v[i] += dt / 6.0 * (k1.f.v[i] + 2 * k2.f.v[i] + 2 * k3.f.v[i] + k4.f.v[i]);
            }
        t += dt;
        ++step;
        if (step - last_snap >= cfg.snapshot_stride || t >= cfg.t_end - 1e-15) {
            snapshot(t);
            last_snap = step;
        }
    }
    tr.cause = TerminationCause::ReachedTEnd;
    tr.t_num = t;
    return tr;
}

FlowTrace run_warped_flow(const geom::WarpedMetric& m0, const FlowConfig& cfg) {
    return run_warped_flow(m0, std::vector<double>{}, cfg);
}

FlowTrace run_warped_flow(const geom::WarpedMetric& m0, const std::vector<double>& a0,
                          const FlowConfig& cfg) {
    if (!cfg.valid()) throw std::invalid_argument("run_warped_flow: bad config");
    m0.validate();
    const bool has_form = !a0.empty();
    const double floor = effective_floor(cfg, m0);

    FlowTrace tr;
    tr.family = Family::Warped;
    tr.cfg = cfg;
    tr.has_form = has_form;
    tr.diag.columns = warped_diag_columns(has_form);

    WarpedState st{m0, a0, std::vector<double>(m0.nx, 0.0)};

    auto snapshot = [&](double t) {
        WarpedSnapshot s;
        s.t = t;
        s.metric = st.m;
        if (has_form) {
            s.form = st.a;
            s.potential = st.f;
            double mean = 0;
            for (double x : s.potential) mean += x;
            mean /= s.potential.size();
            for (double& x : s.potential) x -= mean;
        }
        for (double x : s.metric.phi)
            if (!std::isfinite(x)) throw std::runtime_error("run_warped_flow: non-finite state");
        for (double x : s.metric.psi)
            if (!std::isfinite(x)) throw std::runtime_error("run_warped_flow: non-finite state");
        tr.diag.rows.push_back(warped_diag_row(s, has_form));
        tr.warped.push_back(std::move(s));
    };

    double t = 0;
    snapshot(t);
    long step = 0, last_snap = 0;
    bool singular = false;
    const int nx = m0.nx;
    std::vector<double> k1p(nx), k1s(nx), k2p(nx), k2s(nx), k3p(nx), k3s(nx), k4p(nx), k4s(nx);
    std::vector<double> k1a, k1f, k2a, k2f, k3a, k3f, k4a, k4f;
    while (t < cfg.t_end - 1e-15) {
        if (st.m.min_psi() <= floor) {
            singular = true;
            break;
        }
        double bound = cfg.cfl_safety * warped_dt_bound(st.m);
        if (has_form)
            bound = std::min(bound, cfg.cfl_safety * hodge::WarpedFormOps(st.m).heat_dt_bound());
        const double dt = std::min({cfg.dt_init, bound, cfg.t_end - t});

        auto add = [&](const WarpedState& base, double a, const std::vector<double>& dp,
                       const std::vector<double>& ds, const std::vector<double>& da,
                       const std::vector<double>& df) {
            WarpedState out = base;
            for (int i = 0; i < nx; ++i) {
                out.m.phi[i] += a * dp[i];
                out.m.psi[i] += a * ds[i];
            }
            if (has_form)
                for (int i = 0; i < nx; ++i) {
                    out.a[i] += a * da[i];
                    out.f[i] += a * df[i];
                }
            return out;
        };
        warped_coupled_rhs(st, has_form, a0, k1p, k1s, k1a, k1f);
        auto s2 = add(st, 0.5 * dt, k1p, k1s, k1a, k1f);
        warped_coupled_rhs(s2, has_form, a0, k2p, k2s, k2a, k2f);
        auto s3 = add(st, 0.5 * dt, k2p, k2s, k2a, k2f);
        warped_coupled_rhs(s3, has_form, a0, k3p, k3s, k3a, k3f);
        auto s4 = add(st, dt, k3p, k3s, k3a, k3f);
        warped_coupled_rhs(s4, has_form, a0, k4p, k4s, k4a, k4f);
        for (int i = 0; i < nx; ++i) {
            st.m.phi[i] += dt / 6.0 * (k1p[i] + 2 * k2p[i] + 2 * k3p[i] + k4p[i]);
            st.m.psi[i] += dt / 6.0 * (k1s[i] + 2 * k2s[i] + 2 * k3s[i] + k4s[i]);
        }
        if (has_form)
            for (int i = 0; i < nx; ++i) {
                st.a[i] += dt / 6.0 * (k1a[i] + 2 * k2a[i] + 2 * k3a[i] + k4a[i]);
                st.f[i] += dt / 6.0 * (k1f[i] + 2 * k2f[i] + 2 * k3f[i] + k4f[i]);
            }
        t += dt;
        ++step;
        if (step - last_snap >= cfg.snapshot_stride || t >= cfg.t_end - 1e-15) {
            snapshot(t);
            last_snap = step;
        }
    }
    if (singular) {
        if (step != last_snap) snapshot(t);
        tr.cause = TerminationCause::SingularityImminent;
        tr.t_num = extrapolate_t_num(tr.diag, t);
    } else {
        tr.cause = TerminationCause::ReachedTEnd;
        tr.t_num = t;
    }
    return tr;
}

} // namespace rflab::flow
