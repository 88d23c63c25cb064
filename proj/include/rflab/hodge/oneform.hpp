#pragma once

// Covariant 1-forms on the torus grid and de Rham classes represented by a
// closed base form plus its periods along the two generators.

#include <array>
#include <cmath>

#include "rflab/geom/grid.hpp"
#include "rflab/geom/metrics.hpp"

namespace rflab::hodge {

using geom::ConformalTorusMetric;
using geom::Field2;
using geom::PeriodicGrid2;

struct OneForm {
    Field2 p, q; // components against dx, dy

    OneForm() = default;
    explicit OneForm(const PeriodicGrid2& g) : p(g), q(g) {}
    const PeriodicGrid2& grid() const { return p.grid; }
    bool finite() const { return p.finite() && q.finite(); }
};

struct CohomologyClass {
    OneForm base;                   // closed representative
    std::array<double, 2> periods{}; // integrals along the two generators
};

// Gauge function; mean-zero by convention.
struct Potential {
    Field2 f;
};

inline void normalize_mean_zero(Field2& f) {
    double mean = 0;
    for (double x : f.v) mean += x;
    mean /= static_cast<double>(f.v.size());
    for (double& x : f.v) x -= mean;
}

// sup over nodes of |phi|_g, with |phi|^2 = e^{-2u}(p^2 + q^2).
inline double sup_norm(const OneForm& phi, const ConformalTorusMetric& m) {
    double s = 0;
    const auto& g = phi.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double n2 = phi.p.v[i] * phi.p.v[i] + phi.q.v[i] * phi.q.v[i];
        s = std::max(s, std::exp(-2.0 * m.u.v[i]) * n2);
    }
    return std::sqrt(s);
}

struct PeriodResult {
    double value = 0;
    double spread = 0;        // representative dependence over all rows/cols
    double closedness_sup = 0; // sup |d phi|
    bool warned = false;
};

// Discrete line integral along an axis-aligned representative of the given
// winding; independent of the representative to O(h^2) for closed forms, and
// exactly gauge invariant (adding dF never changes it).
PeriodResult period_detail(const OneForm& phi, int wx, int wy, double closed_warn_tol = 1e-6);

inline double period(const OneForm& phi, int wx, int wy) {
    return period_detail(phi, wx, wy).value;
}

// Constant-coefficient closed representative with prescribed periods.
CohomologyClass make_class(const PeriodicGrid2& g, double period_x, double period_y);

inline CohomologyClass scale_class(const CohomologyClass& c, double s) {
    CohomologyClass out = c;
    for (double& x : out.base.p.v) x *= s;
    for (double& x : out.base.q.v) x *= s;
    out.periods = {c.periods[0] * s, c.periods[1] * s};
    return out;
}

inline CohomologyClass add_classes(const CohomologyClass& a, const CohomologyClass& b) {
    CohomologyClass out = a;
    for (std::size_t i = 0; i < out.base.p.v.size(); ++i) {
        out.base.p.v[i] += b.base.p.v[i];
        out.base.q.v[i] += b.base.q.v[i];
    }
    out.periods = {a.periods[0] + b.periods[0], a.periods[1] + b.periods[1]};
    return out;
}

} // namespace rflab::hodge
