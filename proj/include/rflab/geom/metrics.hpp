#pragma once

// The two model geometries.
//
// ConformalTorusMetric: g = e^{2u}(dx^2 + dy^2) on a periodic 2-D grid.
// WarpedMetric:         g = phi(x)^2 dx^2 + psi(x)^2 g_can on S^1 x S^{n-1},
//                       where g_can is the *unit* round metric; all radius
//                       information lives in psi.

#include <cmath>
#include <vector>

#include "rflab/errors.hpp"
#include "rflab/geom/grid.hpp"

namespace rflab::geom {

struct ConformalTorusMetric {
    Field2 u; // log-conformal factor

    const PeriodicGrid2& grid() const { return u.grid; }

    void validate() const {
        if (!u.grid.valid()) throw std::invalid_argument("conformal torus: bad grid");
        for (int j = 0; j < u.grid.ny; ++j)
            for (int i = 0; i < u.grid.nx; ++i)
                if (!std::isfinite(u.raw(i, j)))
                    throw InvalidField("u", i, j, "non-finite");
    }

    // g -> lambda g is u -> u + log(lambda)/2.
    ConformalTorusMetric scaled(double lambda) const {
        ConformalTorusMetric out = *this;
        const double s = 0.5 * std::log(lambda);
        for (double& x : out.u.v) x += s;
        return out;
    }

    double total_area() const {
        double a = 0;
        for (double x : u.v) a += std::exp(2.0 * x);
        return a * u.grid.hx() * u.grid.hy();
    }
};

struct WarpedMetric {
    int n = 3;          // ambient dimension, >= 3
    int nx = 0;         // S^1 node count
    double period = 0;  // S^1 coordinate period
    std::vector<double> phi; // metric coefficient on dx, > 0
    std::vector<double> psi; // sphere radius, > 0

    double hx() const { return period / nx; }
    int wrap(int i) const {
        i %= nx;
        return i < 0 ? i + nx : i;
    }

    void validate() const {
        if (n < 3) throw std::invalid_argument("warped metric: n must be >= 3");
        if (nx < 8 || !(period > 0) || !std::isfinite(period))
            throw std::invalid_argument("warped metric: bad grid");
        if (static_cast<int>(phi.size()) != nx || static_cast<int>(psi.size()) != nx)
            throw std::invalid_argument("warped metric: field size mismatch");
        for (int i = 0; i < nx; ++i) {
            if (!std::isfinite(phi[i]) || phi[i] <= 0) throw InvalidField("phi", i, 0, "must be finite and > 0");
            if (!std::isfinite(psi[i]) || psi[i] <= 0) throw InvalidField("psi", i, 0, "must be finite and > 0");
        }
    }

    WarpedMetric scaled(double lambda) const {
        WarpedMetric out = *this;
        const double s = std::sqrt(lambda);
        for (double& x : out.phi) x *= s;
        for (double& x : out.psi) x *= s;
        return out;
    }

    double min_psi() const {
        double m = psi[0];
        for (double x : psi) m = std::min(m, x);
        return m;
    }
    double s1_length() const { // arclength of the S^1 factor
        double l = 0;
        for (double x : phi) l += x;
        return l * hx();
    }
};

inline ConformalTorusMetric flat_torus(int nx, int ny, double lx, double ly) {
    ConformalTorusMetric m;
    m.u = Field2(PeriodicGrid2{nx, ny, lx, ly});
    return m;
}

} // namespace rflab::geom
