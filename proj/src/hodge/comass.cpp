#include "rflab/hodge/comass.hpp"

#include <cmath>

#include "rflab/geom/grid.hpp"

namespace rflab::hodge {

using geom::dx_centered;
using geom::dy_centered;
using geom::Field2;

namespace {

// Pairing lower bound over the four primitive windings, with explicit
// axis-aligned / staircase representatives measured in g.
double pairing_lower_bound(const CohomologyClass& cls, const ConformalTorusMetric& m) {
    const auto& g = m.grid();
    double min_row = 0, min_col = 0;
    for (int j = 0; j < g.ny; ++j) {
        double s = 0;
        for (int i = 0; i < g.nx; ++i) s += std::exp(m.u.raw(i, j));
        s *= g.hx();
        min_row = (j == 0) ? s : std::min(min_row, s);
    }
    for (int i = 0; i < g.nx; ++i) {
        double s = 0;
        for (int j = 0; j < g.ny; ++j) s += std::exp(m.u.raw(i, j));
        s *= g.hy();
        min_col = (i == 0) ? s : std::min(min_col, s);
    }
    const double P1 = cls.periods[0], P2 = cls.periods[1];
    double best = 0;
    auto consider = [&](double pairing, double len) {
        if (std::fabs(pairing) > 0 && len > 0) best = std::max(best, std::fabs(pairing) / len);
    };
    consider(P1, min_row);
    consider(P2, min_col);
    consider(P1 + P2, min_row + min_col);
    consider(P1 - P2, min_row + min_col);
    return best;
}

// Unpreconditioned CG on the exact discrete Hodge system
//   (DxDx + DyDy) F = Dx p0 + Dy q0
// (the conformal factor drops out of the 2-D harmonic equation). The
// checkerboard kernel of the wide stencil never enters: the right-hand side
// and a zero initial guess are orthogonal to it, and kernel components do not
// affect dF anyway.
Field2 harmonic_potential(const OneForm& base) {
    const auto& g = base.grid();
    Field2 rhs = dx_centered(base.p);
    {
        const Field2 qy = dy_centered(base.q);
        for (std::size_t i = 0; i < rhs.v.size(); ++i) rhs.v[i] += qy.v[i];
    }
    auto apply = [&](const Field2& f) { // A = -(DxDx + DyDy), positive semidefinite
        Field2 out = dx_centered(dx_centered(f));
        const Field2 lyy = dy_centered(dy_centered(f));
        for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = -(out.v[i] + lyy.v[i]);
        return out;
    };
    for (double& x : rhs.v) x = -x; // A F = -rhs_orig

    Field2 f(g, 0.0), r = rhs, p = r;
    auto dot = [](const Field2& a, const Field2& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
        return s;
    };
    double rr = dot(r, r);
    const double rr0 = rr;
    if (rr0 == 0) return f;
    const int max_iter = 6 * std::max(g.nx, g.ny);
    for (int it = 0; it < max_iter && rr > 1e-24 * rr0; ++it) {
        const Field2 ap = apply(p);
        const double alpha = rr / dot(p, ap);
        for (std::size_t i = 0; i < f.v.size(); ++i) {
            f.v[i] += alpha * p.v[i];
            r.v[i] -= alpha * ap.v[i];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < p.v.size(); ++i) p.v[i] = r.v[i] + beta * p.v[i];
    }
    return f;
}

} // namespace

ComassResult comass_norm(const CohomologyClass& cls, const ConformalTorusMetric& m,
                         const ComassOptions& opts) {
    m.validate();
    const auto& g = m.grid();
    const std::size_t n = g.size();
    const double inv_n = 1.0 / static_cast<double>(n);

    Field2 w(g); // e^{-2u}
    for (std::size_t i = 0; i < n; ++i) w.v[i] = std::exp(-2.0 * m.u.v[i]);

    Field2 f(g, 0.0);
    if (opts.warm_start) {
        f = opts.warm_start->f;
    } else if (opts.harmonic_init) {
        f = harmonic_potential(cls.base);
    }

    ComassResult res;
    res.lower_bound = pairing_lower_bound(cls, m);

    // residual form r = base + dF and pointwise z = |r|_g^2
    auto eval_sup = [&](const Field2& ff) {
        const Field2 fx = dx_centered(ff), fy = dy_centered(ff);
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double rp = cls.base.p.v[i] + fx.v[i];
            const double rq = cls.base.q.v[i] + fy.v[i];
            s = std::max(s, w.v[i] * (rp * rp + rq * rq));
        }
        return std::sqrt(s);
    };
    auto eval_obj = [&](const Field2& ff, int k) {
        const Field2 fx = dx_centered(ff), fy = dy_centered(ff);
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double rp = cls.base.p.v[i] + fx.v[i];
            const double rq = cls.base.q.v[i] + fy.v[i];
            s += std::pow(w.v[i] * (rp * rp + rq * rq), k);
        }
        return s * inv_n;
    };

    int global_iter = 0;
    for (int k : opts.k_ladder) {
        double obj = eval_obj(f, k);
        double alpha = 1.0;
        for (int it = 0; it < opts.max_iter_per_k; ++it, ++global_iter) {
            // gradient of mean(z^k) wrt F
            const Field2 fx = dx_centered(f), fy = dy_centered(f);
            Field2 gp(g), gq(g);
            for (std::size_t i = 0; i < n; ++i) {
                const double rp = cls.base.p.v[i] + fx.v[i];
                const double rq = cls.base.q.v[i] + fy.v[i];
                const double z = w.v[i] * (rp * rp + rq * rq);
                const double zk1 = (k == 1) ? 1.0 : std::pow(z, k - 1);
                gp.v[i] = zk1 * w.v[i] * rp;
                gq.v[i] = zk1 * w.v[i] * rq;
            }
            Field2 grad = dx_centered(gp);
            const Field2 gqy = dy_centered(gq);
            const double c = -2.0 * k * inv_n;
            double gnorm2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                grad.v[i] = c * (grad.v[i] + gqy.v[i]);
                gnorm2 += grad.v[i] * grad.v[i];
            }
            if (gnorm2 == 0) break;

            // backtracking line search (Armijo)
            alpha *= 2.0;
            Field2 trial = f;
            double trial_obj = obj;
            bool ok = false;
            for (int bt = 0; bt < 60; ++bt) {
                for (std::size_t i = 0; i < n; ++i) trial.v[i] = f.v[i] - alpha * grad.v[i];
                trial_obj = eval_obj(trial, k);
                if (trial_obj <= obj - 1e-4 * alpha * gnorm2) {
                    ok = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!ok) break;
            f = trial;
            const double rel = (obj - trial_obj) / std::max(obj, 1e-300);
            obj = trial_obj;
            if (global_iter % opts.log_stride == 0) {
                const double sup = eval_sup(f);
                res.log.push_back({global_iter, k, std::pow(obj, 0.5 / k), sup,
                                   std::max(0.0, sup - res.lower_bound)});
            }
            if (rel < opts.rel_tol) break;
        }
        const double sup = eval_sup(f);
        res.log.push_back({global_iter, k, std::pow(obj, 0.5 / k), sup,
                           std::max(0.0, sup - res.lower_bound)});
    }

    normalize_mean_zero(f);
    res.minimizer.f = f;
    res.value = eval_sup(f);
    res.gap = std::max(0.0, res.value - res.lower_bound);
    return res;
}

} // namespace rflab::hodge
