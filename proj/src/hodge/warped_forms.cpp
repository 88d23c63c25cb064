#include "rflab/hodge/warped_forms.hpp"

#include <cmath>

namespace rflab::hodge {

namespace {

std::vector<double> dx_centered_1d(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const int ip = i + 1 == n ? 0 : i + 1;
        const int im = i == 0 ? n - 1 : i - 1;
        out[i] = (f[ip] - f[im]) / (2 * h);
    }
    return out;
}

} // namespace

WarpedFormOps::WarpedFormOps(const WarpedMetric& m) : nx_(m.nx), hx_(m.hx()) {
    b_.resize(nx_);
    winv_.resize(nx_);
    for (int i = 0; i < nx_; ++i) {
        const double psn = std::pow(m.psi[i], m.n - 1);
        b_[i] = psn / m.phi[i];
        winv_[i] = 1.0 / (m.phi[i] * psn);
    }
}

std::vector<double> WarpedFormOps::codifferential(const std::vector<double>& a) const {
    std::vector<double> ba(nx_);
    for (int i = 0; i < nx_; ++i) ba[i] = b_[i] * a[i];
    std::vector<double> out = dx_centered_1d(ba, hx_);
    for (int i = 0; i < nx_; ++i) out[i] = -winv_[i] * out[i];
    return out;
}

std::vector<double> WarpedFormOps::laplacian(const std::vector<double>& a) const {
    // -(d0 delta) on x-proportional forms (the reduced complex has no 2-forms)
    std::vector<double> del = codifferential(a);
    std::vector<double> out = dx_centered_1d(del, hx_);
    for (double& x : out) x = -x;
    return out;
}

std::vector<double> WarpedFormOps::scalar_laplacian(const std::vector<double>& f) const {
    std::vector<double> df = dx_centered_1d(f, hx_);
    for (int i = 0; i < nx_; ++i) df[i] *= b_[i];
    std::vector<double> out = dx_centered_1d(df, hx_);
    for (int i = 0; i < nx_; ++i) out[i] *= winv_[i];
    return out;
}

std::vector<double> WarpedFormOps::d0(const std::vector<double>& f) const {
    return dx_centered_1d(f, hx_);
}

double WarpedFormOps::heat_dt_bound() const {
    // Gershgorin row bound of D((1/w) D(b .)) / (4 h^2) coefficients
    double rho = 0;
    const double inv4h2 = 1.0 / (4 * hx_ * hx_);
    for (int i = 0; i < nx_; ++i) {
        const int ip = (i + 1) % nx_;
        const int im = (i + nx_ - 1) % nx_;
        const int ipp = (i + 2) % nx_;
        const int imm = (i + nx_ - 2) % nx_;
        const double row = (b_[ipp] + b_[i]) * winv_[ip] + (b_[i] + b_[imm]) * winv_[im];
        rho = std::max(rho, row * inv4h2);
    }
    return 2.5 / rho;
}

double warped_sup_norm(const std::vector<double>& a, const WarpedMetric& m) {
    double s = 0;
    for (int i = 0; i < m.nx; ++i) s = std::max(s, std::fabs(a[i]) / m.phi[i]);
    return s;
}

double warped_period(const std::vector<double>& a, const WarpedMetric& m) {
    double s = 0;
    for (double x : a) s += x;
    return s * m.hx();
}

WarpedComassResult warped_comass(double target_period, const WarpedMetric& m) {
    const int n = m.nx;
    const double h = m.hx();
    const double a0 = target_period / m.period;
    const double inv_n = 1.0 / n;

    std::vector<double> iphi2(n);
    for (int i = 0; i < n; ++i) iphi2[i] = 1.0 / (m.phi[i] * m.phi[i]);

    std::vector<double> f(n, 0.0);
    auto eval_obj = [&](const std::vector<double>& ff, int k) {
        std::vector<double> df = [&] {
            std::vector<double> out(n);
            for (int i = 0; i < n; ++i) {
                const int ip = (i + 1) % n;
                const int im = (i + n - 1) % n;
                out[i] = (ff[ip] - ff[im]) / (2 * h);
            }
            return out;
        }();
        double s = 0;
        for (int i = 0; i < n; ++i) {
            const double r = a0 + df[i];
            s += std::pow(r * r * iphi2[i], k);
        }
        return s * inv_n;
    };
    auto eval_sup = [&](const std::vector<double>& ff) {
        double s = 0;
        for (int i = 0; i < n; ++i) {
            const int ip = (i + 1) % n;
            const int im = (i + n - 1) % n;
            const double r = a0 + (ff[ip] - ff[im]) / (2 * h);
            s = std::max(s, std::fabs(r) / m.phi[i]);
        }
        return s;
    };

    for (int k : {2, 8, 32}) {
        double obj = eval_obj(f, k);
        double alpha = 1.0;
        for (int it = 0; it < 4000; ++it) {
            std::vector<double> gz(n);
            for (int i = 0; i < n; ++i) {
                const int ip = (i + 1) % n;
                const int im = (i + n - 1) % n;
                const double r = a0 + (f[ip] - f[im]) / (2 * h);
                const double z = r * r * iphi2[i];
                gz[i] = std::pow(z, k - 1) * iphi2[i] * r;
            }
            std::vector<double> grad(n);
            double gnorm2 = 0;
            for (int i = 0; i < n; ++i) {
                const int ip = (i + 1) % n;
                const int im = (i + n - 1) % n;
                grad[i] = -2.0 * k * inv_n * (gz[ip] - gz[im]) / (2 * h);
                gnorm2 += grad[i] * grad[i];
            }
            if (gnorm2 == 0) break;
            alpha *= 2.0;
            std::vector<double> trial(n);
            double trial_obj = obj;
            bool ok = false;
            for (int bt = 0; bt < 60; ++bt) {
                for (int i = 0; i < n; ++i) trial[i] = f[i] - alpha * grad[i];
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
            if (rel < 1e-10) break;
        }
    }

    WarpedComassResult out;
    out.minimizer_f = f;
    out.value = eval_sup(f);
    out.lower_bound = std::fabs(target_period) / m.s1_length();
    out.gap = std::max(0.0, out.value - out.lower_bound);
    return out;
}

} // namespace rflab::hodge
