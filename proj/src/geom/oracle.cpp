#include "rflab/geom/oracle.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace rflab::geom {

namespace {

constexpr int D = kOracleMaxDim;

struct Mat {
    int d = 0;
    std::array<double, D * D> a{};
    double& operator()(int i, int j) { return a[i * d + j]; }
    double operator()(int i, int j) const { return a[i * d + j]; }
};

// Cholesky-based inverse; doubles as the positive-definiteness gate.
Mat invert_pd(const Mat& g) {
    const int d = g.d;
    Mat l{};
    l.d = d;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = g(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(s > 0) || !std::isfinite(s))
                    throw std::invalid_argument("oracle: metric not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    // invert L, then ginv = L^{-T} L^{-1}
    Mat li{};
    li.d = d;
    for (int i = 0; i < d; ++i) {
        li(i, i) = 1.0 / l(i, i);
        for (int j = 0; j < i; ++j) {
            double s = 0;
            for (int k = j; k < i; ++k) s -= l(i, k) * li(k, j);
            li(i, j) = s / l(i, i);
        }
    }
    Mat inv{};
    inv.d = d;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0;
            for (int k = std::max(i, j); k < d; ++k) s += li(k, i) * li(k, j);
            inv(i, j) = s;
        }
    return inv;
}

Mat eval(const MetricFn& f, int d, const double* x) {
    Mat g{};
    g.d = d;
    f(std::span<const double>(x, d), std::span<double>(g.a.data(), d * d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (!std::isfinite(g(i, j))) throw std::invalid_argument("oracle: non-finite metric");
    return g;
}

// Gamma^i_{jk} at y, flattened (i*d + j)*d + k.
void christoffel(const MetricFn& f, int d, const double* y, double h, double* gamma) {
    const Mat g = eval(f, d, y);
    const Mat ginv = invert_pd(g);
    // dg[m](i,j) = d_m g_ij
    std::array<Mat, D> dg;
    std::array<double, D> pt;
    for (int m = 0; m < d; ++m) {
        for (int c = 0; c < d; ++c) pt[c] = y[c];
        pt[m] = y[m] + h;
        const Mat gp = eval(f, d, pt.data());
        pt[m] = y[m] - h;
        const Mat gm = eval(f, d, pt.data());
        dg[m].d = d;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) dg[m](i, j) = (gp(i, j) - gm(i, j)) / (2 * h);
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                double s = 0;
                for (int l = 0; l < d; ++l)
                    s += ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
                gamma[(i * d + j) * d + k] = 0.5 * s;
            }
}

} // namespace

OraclePoint generic_curvature_oracle(const MetricFn& metric, int dim,
                                     std::span<const double> point, double h) {
    if (dim < 2 || dim > kOracleMaxDim)
        throw std::invalid_argument("oracle: dimension must be in [2, 4]");
    if (!(h > 0)) throw std::invalid_argument("oracle: spacing must be positive");
    const int d = dim;
    std::array<double, D> x{};
    for (int i = 0; i < d; ++i) x[i] = point[i];

    const Mat g = eval(metric, d, x.data());
    const Mat ginv = invert_pd(g);

    const int d3 = d * d * d;
    std::vector<double> gamma0(d3), gp(d3), gm(d3);
    std::vector<double> dgamma(static_cast<std::size_t>(d) * d3); // d_k Gamma^i_{lj}
    christoffel(metric, d, x.data(), h, gamma0.data());
    std::array<double, D> pt;
    for (int k = 0; k < d; ++k) {
        for (int c = 0; c < d; ++c) pt[c] = x[c];
        pt[k] = x[k] + h;
        christoffel(metric, d, pt.data(), h, gp.data());
        pt[k] = x[k] - h;
        christoffel(metric, d, pt.data(), h, gm.data());
        for (int c = 0; c < d3; ++c)
            dgamma[static_cast<std::size_t>(k) * d3 + c] = (gp[c] - gm[c]) / (2 * h);
    }
    auto G = [&](int i, int j, int k) { return gamma0[(i * d + j) * d + k]; };
    auto dG = [&](int k, int i, int l, int j) {
        return dgamma[static_cast<std::size_t>(k) * d3 + (i * d + l) * d + j];
    };

    // R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj}
    //            + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}
    const int d4 = d * d * d * d;
    std::vector<double> rup(d4);
    auto up = [&](int i, int j, int k, int l) -> double& {
        return rup[((i * d + j) * d + k) * d + l];
    };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double s = dG(k, i, l, j) - dG(l, i, k, j);
                    for (int m = 0; m < d; ++m)
                        s += G(i, k, m) * G(m, l, j) - G(i, l, m) * G(m, k, j);
                    up(i, j, k, l) = s;
                }

    OraclePoint out;
    out.dim = d;
    out.metric.assign(g.a.begin(), g.a.begin() + d * d);
    out.ricci.assign(d * d, 0.0);
    for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) {
            double s = 0;
            for (int i = 0; i < d; ++i) s += up(i, j, i, l);
            out.ricci[j * d + l] = s;
        }
    out.scalar = 0;
    for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) out.scalar += ginv(j, l) * out.ricci[j * d + l];

    out.riemann.assign(d4, 0.0);
    auto low = [&](int i, int j, int k, int l) -> double& {
        return out.riemann[((i * d + j) * d + k) * d + l];
    };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double s = 0;
                    for (int m = 0; m < d; ++m) s += g(i, m) * up(m, j, k, l);
                    low(i, j, k, l) = s;
                }

    // |Rm|^2 = R_{ijkl} R^{ijkl}: raise all four indices.
    double frob2 = 0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double raised = 0;
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b)
                            for (int c = 0; c < d; ++c)
                                for (int e = 0; e < d; ++e)
                                    raised += ginv(i, a) * ginv(j, b) * ginv(k, c) * ginv(l, e) *
                                              low(a, b, c, e);
                    frob2 += low(i, j, k, l) * raised;
                }
    out.riem_frobenius = std::sqrt(std::max(0.0, frob2));

    double maxsec = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const double denom = g(i, i) * g(j, j) - g(i, j) * g(i, j);
            if (denom > 1e-14) {
                const double kk = low(i, j, i, j) / denom;
                maxsec = std::max(maxsec, std::fabs(kk));
            }
        }
    out.max_abs_sectional = maxsec;
    return out;
}

} // namespace rflab::geom
