#include "rflab/loops/shorten.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace rflab::loops {

namespace {

// Gradient of total length wrt the free vertices v[0..n-1] (v[n] mirrors
// v[0] + shift). Each segment contributes endpoint terms plus a midpoint
// metric-derivative term.
void length_gradient(const LoopPolyline& c, const SurfaceMetric& m,
                     std::vector<std::array<double, 2>>& grad, double& length) {
    const int n = c.segments();
    grad.assign(n, {0.0, 0.0});
    length = 0;
    for (int i = 0; i < n; ++i) {
        const double dx = c.v[i + 1][0] - c.v[i][0];
        const double dy = c.v[i + 1][1] - c.v[i][1];
        Mat2 g, gx, gy;
        m.metric_jet(0.5 * (c.v[i][0] + c.v[i + 1][0]), 0.5 * (c.v[i][1] + c.v[i + 1][1]), g, gx,
                     gy);
        const double len =
            std::sqrt(g.a11 * dx * dx + 2 * g.a12 * dx * dy + g.a22 * dy * dy);
        length += len;
        const double gdx = (g.a11 * dx + g.a12 * dy) / len;
        const double gdy = (g.a12 * dx + g.a22 * dy) / len;
        const double mx = (gx.a11 * dx * dx + 2 * gx.a12 * dx * dy + gx.a22 * dy * dy) / (4 * len);
        const double my = (gy.a11 * dx * dx + 2 * gy.a12 * dx * dy + gy.a22 * dy * dy) / (4 * len);
        const int a = i;               // tail vertex dof
        const int b = (i + 1) % n;     // head vertex dof (wraps onto v[0])
        grad[a][0] += -gdx + mx;
        grad[a][1] += -gdy + my;
        grad[b][0] += gdx + mx;
        grad[b][1] += gdy + my;
    }
}

void apply_closure(LoopPolyline& c, const SurfaceMetric& m) {
    c.v.back() = {c.v.front()[0] + c.w.p * m.lx, c.v.front()[1] + c.w.q * m.ly};
}

// Sobolev smoothing of the descent direction: solve (I - beta D2) d = g
// componentwise on the periodic index lattice (D2 = second difference).
// Equalizes the spectrum of the length Hessian so convergence is
// mesh-independent; plain descent directions stall on low-frequency modes.
class SobolevSolver {
public:
    SobolevSolver(int n, double beta) : n_(n), beta_(beta) {
        // Sherman-Morrison splitting of the periodic tridiagonal system
        const double diag = 1 + 2 * beta, off = -beta;
        a_.assign(n, off);
        b_.assign(n, diag);
        c_.assign(n, off);
        // modified system: b[0] -= gamma, b[n-1] -= off*off/gamma
        gamma_ = -b_[0];
        b_[0] -= gamma_;
        b_[n - 1] -= off * off / gamma_;
        u_.assign(n, 0.0);
        u_[0] = gamma_;
        u_[n - 1] = off;
        z_ = solve_tridiag(u_);
    }

    std::vector<double> apply(const std::vector<double>& g) const {
        std::vector<double> y = solve_tridiag(g);
        const double off = -beta_;
        const double vy = y[0] + (off / gamma_) * y[n_ - 1];
        const double vz = 1.0 + z_[0] + (off / gamma_) * z_[n_ - 1];
        const double factor = vy / vz;
        for (int i = 0; i < n_; ++i) y[i] -= factor * z_[i];
        return y;
    }

private:
    std::vector<double> solve_tridiag(const std::vector<double>& rhs) const {
        std::vector<double> cp(n_), dp(n_);
        cp[0] = c_[0] / b_[0];
        dp[0] = rhs[0] / b_[0];
        for (int i = 1; i < n_; ++i) {
            const double m = b_[i] - a_[i] * cp[i - 1];
            cp[i] = c_[i] / m;
            dp[i] = (rhs[i] - a_[i] * dp[i - 1]) / m;
        }
        std::vector<double> x(n_);
        x[n_ - 1] = dp[n_ - 1];
        for (int i = n_ - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
        return x;
    }

    int n_;
    double beta_, gamma_;
    std::vector<double> a_, b_, c_, u_, z_;
};

} // namespace

double geodesic_residual(const LoopPolyline& c, const SurfaceMetric& m) {
    std::vector<std::array<double, 2>> grad;
    double length = 0;
    length_gradient(c, m, grad, length);
    const int n = c.segments();
    const double seg = length / n;
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        const Mat2 g = m.metric(c.v[i][0], c.v[i][1]);
        const double det = g.det();
        // |grad|_{g^{-1}}
        const double q = (g.a22 * grad[i][0] * grad[i][0] - 2 * g.a12 * grad[i][0] * grad[i][1] +
                          g.a11 * grad[i][1] * grad[i][1]) /
                         det;
        worst = std::max(worst, std::sqrt(std::max(0.0, q)) / seg);
    }
    return worst;
}

ShortenResult shorten_loop(const LoopPolyline& seed, const SurfaceMetric& m,
                           const ShortenOptions& opts) {
    if (seed.w.trivial())
        throw std::invalid_argument("shorten_loop: trivial winding collapses to a point");
    LoopPolyline c = seed;
    if (opts.vertices > 0 && opts.vertices + 1 != static_cast<int>(c.v.size()))
        c = resample_uniform(c, m, opts.vertices);
    c.validate(m.lx, m.ly);

    std::vector<std::array<double, 2>> grad, step;
    double length = 0;
    length_gradient(c, m, grad, length);

    std::deque<double> window;
    window.push_back(length);
    const int n = c.segments();
    const double smooth_width = n / 8.0;
    const SobolevSolver sobolev(n, smooth_width * smooth_width);
    double alpha = 0.5 * length / c.segments(); // initial step in arclength units
    int it = 0;
    bool converged = false;
    LoopPolyline trial = c;
    std::vector<double> gx(n), gy(n);
    for (; it < opts.max_iter; ++it) {
        step.assign(n, {0.0, 0.0});
        for (int i = 0; i < n; ++i) {
            gx[i] = grad[i][0];
            gy[i] = grad[i][1];
        }
        const std::vector<double> sx = sobolev.apply(gx);
        const std::vector<double> sy = sobolev.apply(gy);
        double decrease_sq = 0; // <grad, smoothed grad>
        for (int i = 0; i < n; ++i) {
            step[i][0] = sx[i];
            step[i][1] = sy[i];
            decrease_sq += grad[i][0] * step[i][0] + grad[i][1] * step[i][1];
        }
        if (decrease_sq <= 0) break;

        alpha *= 2.0;
        bool ok = false;
        double trial_len = length;
        for (int bt = 0; bt < 50; ++bt) {
            for (int i = 0; i < n; ++i) {
                trial.v[i][0] = c.v[i][0] - alpha * step[i][0];
                trial.v[i][1] = c.v[i][1] - alpha * step[i][1];
            }
            apply_closure(trial, m);
            trial_len = loop_length(trial, m);
            if (trial_len <= length - 1e-4 * alpha * decrease_sq) {
                ok = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!ok) break;
        std::swap(c.v, trial.v);
        length = trial_len;

        if (opts.resample_every > 0 && (it + 1) % opts.resample_every == 0) {
            c = resample_uniform(c, m, n);
            length = loop_length(c, m);
        }
        length_gradient(c, m, grad, length);

        window.push_back(length);
        if (static_cast<int>(window.size()) > opts.window + 1) window.pop_front();
        if (static_cast<int>(window.size()) == opts.window + 1) {
            const double rel = (window.front() - window.back()) / std::max(window.back(), 1e-300);
            if (rel < opts.window_rel_tol) {
                converged = true;
                break;
            }
        }
    }

    // tail polish with unsmoothed natural-gradient steps: the Sobolev phase
    // converges the global shape but barely moves the per-vertex components
    // that dominate the geodesic residual
    {
        double alpha_t = 0.05 * length / n;
        for (int tail = 0; tail < opts.max_iter / 4; ++tail) {
            double decrease_sq = 0;
            for (int i = 0; i < n; ++i) {
                const Mat2 g = m.metric(c.v[i][0], c.v[i][1]);
                const double det = g.det();
                step[i][0] = (g.a22 * grad[i][0] - g.a12 * grad[i][1]) / det;
                step[i][1] = (-g.a12 * grad[i][0] + g.a11 * grad[i][1]) / det;
                // the inverse metric can amplify wildly where a component is
                // tiny (near-pinch g22); cap the displacement at the local
                // coordinate segment scale, which keeps every term a descent
                // contribution
                const int ip = (i + 1) % n;
                const int im = (i + n - 1) % n;
                const double local =
                    0.25 * (std::hypot(c.v[ip][0] - c.v[i][0], c.v[ip][1] - c.v[i][1]) +
                            std::hypot(c.v[i][0] - c.v[im][0], c.v[i][1] - c.v[im][1]));
                const double norm = std::hypot(step[i][0], step[i][1]);
                if (norm > local && norm > 0) {
                    step[i][0] *= local / norm;
                    step[i][1] *= local / norm;
                }
                decrease_sq += grad[i][0] * step[i][0] + grad[i][1] * step[i][1];
            }
            if (decrease_sq <= 0) break;
            alpha_t *= 2.0;
            bool ok = false;
            double trial_len = length;
            for (int bt = 0; bt < 50; ++bt) {
                for (int i = 0; i < n; ++i) {
                    trial.v[i][0] = c.v[i][0] - alpha_t * step[i][0];
                    trial.v[i][1] = c.v[i][1] - alpha_t * step[i][1];
                }
                apply_closure(trial, m);
                trial_len = loop_length(trial, m);
                if (trial_len <= length - 1e-4 * alpha_t * decrease_sq) {
                    ok = true;
                    break;
                }
                alpha_t *= 0.5;
            }
            if (!ok) break;
            std::swap(c.v, trial.v);
            length = trial_len;
            length_gradient(c, m, grad, length);
            ++it;
        }
    }

    // final uniform resample: keeps downstream consumers (covers, frames)
    // away from degenerate vertex spacing
    c = resample_uniform(c, m, n);
    length = loop_length(c, m);

    ShortenResult res;
    res.loop = std::move(c);
    res.length = length;
    res.residual = geodesic_residual(res.loop, m);
    res.iterations = it;
    res.converged = converged || res.residual <= opts.residual_tol;
    return res;
}

} // namespace rflab::loops
