#include "rflab/geom/grid.hpp"

namespace rflab::geom {

Field2 dx_centered(const Field2& f) {
    const auto& g = f.grid;
    Field2 out(g);
    const double inv2h = 1.0 / (2.0 * g.hx());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = i + 1 == g.nx ? 0 : i + 1;
            const int im = i == 0 ? g.nx - 1 : i - 1;
            out.raw(i, j) = (f.raw(ip, j) - f.raw(im, j)) * inv2h;
        }
    }
    return out;
}

Field2 dy_centered(const Field2& f) {
    const auto& g = f.grid;
    Field2 out(g);
    const double inv2h = 1.0 / (2.0 * g.hy());
    for (int j = 0; j < g.ny; ++j) {
        const int jp = j + 1 == g.ny ? 0 : j + 1;
        const int jm = j == 0 ? g.ny - 1 : j - 1;
        for (int i = 0; i < g.nx; ++i)
            out.raw(i, j) = (f.raw(i, jp) - f.raw(i, jm)) * inv2h;
    }
    return out;
}

Field2 laplacian5(const Field2& f) {
    const auto& g = f.grid;
    Field2 out(g);
    const double ihx2 = 1.0 / (g.hx() * g.hx());
    const double ihy2 = 1.0 / (g.hy() * g.hy());
    for (int j = 0; j < g.ny; ++j) {
        const int jp = j + 1 == g.ny ? 0 : j + 1;
        const int jm = j == 0 ? g.ny - 1 : j - 1;
        for (int i = 0; i < g.nx; ++i) {
            const int ip = i + 1 == g.nx ? 0 : i + 1;
            const int im = i == 0 ? g.nx - 1 : i - 1;
            const double c = f.raw(i, j);
            out.raw(i, j) = (f.raw(ip, j) - 2 * c + f.raw(im, j)) * ihx2 +
                            (f.raw(i, jp) - 2 * c + f.raw(i, jm)) * ihy2;
        }
    }
    return out;
}

} // namespace rflab::geom
