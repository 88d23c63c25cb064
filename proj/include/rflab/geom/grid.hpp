#pragma once

// Periodic 2-D grid and nodal scalar fields. Indexing wraps exactly; there are
// no boundary rows anywhere in the code base.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace rflab::geom {

struct PeriodicGrid2 {
    int nx = 0, ny = 0;   // node counts, >= 8 each
    double lx = 0, ly = 0; // periods

    double hx() const { return lx / nx; }
    double hy() const { return ly / ny; }

    int wrap_x(int i) const {
        i %= nx;
        return i < 0 ? i + nx : i;
    }
    int wrap_y(int j) const {
        j %= ny;
        return j < 0 ? j + ny : j;
    }
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(wrap_y(j)) * nx + wrap_x(i);
    }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }

    double x(int i) const { return hx() * i; }
    double y(int j) const { return hy() * j; }

    bool valid() const {
        return nx >= 8 && ny >= 8 && std::isfinite(lx) && std::isfinite(ly) && lx > 0 && ly > 0;
    }
    bool operator==(const PeriodicGrid2&) const = default;
};

// Scalar field on grid nodes, row-major (j * nx + i), periodic access.
struct Field2 {
    PeriodicGrid2 grid;
    std::vector<double> v;

    Field2() = default;
    explicit Field2(const PeriodicGrid2& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

    double& at(int i, int j) { return v[grid.idx(i, j)]; }
    double at(int i, int j) const { return v[grid.idx(i, j)]; }

    // Unwrapped fast access for hot loops (caller passes in-range indices).
    double& raw(int i, int j) { return v[static_cast<std::size_t>(j) * grid.nx + i]; }
    double raw(int i, int j) const { return v[static_cast<std::size_t>(j) * grid.nx + i]; }

    bool finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

inline double field_max(const Field2& f) {
    double m = f.v[0];
    for (double x : f.v) m = std::max(m, x);
    return m;
}
inline double field_min(const Field2& f) {
    double m = f.v[0];
    for (double x : f.v) m = std::min(m, x);
    return m;
}
inline double field_max_abs(const Field2& f) {
    double m = 0;
    for (double x : f.v) m = std::max(m, std::fabs(x));
    return m;
}

// Centered first differences and the compact 5-point Laplacian.
Field2 dx_centered(const Field2& f);
Field2 dy_centered(const Field2& f);
Field2 laplacian5(const Field2& f);

} // namespace rflab::geom
