#include "rflab/loops/dijkstra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace rflab::loops {

namespace {

constexpr int kOffsets[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1},
                                 {-1, 1}, {-1, -1}, {1, 2},  {1, -2}, {-1, 2}, {-1, -2},
                                 {2, 1},  {2, -1},  {-2, 1}, {-2, -1}};

struct Lattice {
    const SurfaceMetric* m;
    int nx, ny; // lattice density per period
    double hx, hy;
    int x_lo, x_hi, y_lo, y_hi;
    long NX, NY;

    std::size_t nodes() const { return static_cast<std::size_t>(NX) * NY; }
    std::size_t id(int ix, int iy) const {
        return static_cast<std::size_t>(iy - y_lo) * NX + (ix - x_lo);
    }
    bool inside(int ix, int iy) const {
        return ix >= x_lo && ix <= x_hi && iy >= y_lo && iy <= y_hi;
    }
    double edge(int ix, int iy, int jx, int jy) const {
        const double x0 = ix * hx, y0 = iy * hy, x1 = jx * hx, y1 = jy * hy;
        const Mat2 g = m->metric(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        const double dx = x1 - x0, dy = y1 - y0;
        return std::sqrt(g.a11 * dx * dx + 2 * g.a12 * dx * dy + g.a22 * dy * dy);
    }
};

// Dijkstra from a source set; abort once the frontier exceeds `cutoff`.
// Returns distances (infinity where unreached) and source labels.
void run_dijkstra(const Lattice& lat, const std::vector<std::pair<std::size_t, int>>& sources,
                  double cutoff, std::vector<double>& dist, std::vector<int>& label) {
    const double inf = std::numeric_limits<double>::infinity();
    dist.assign(lat.nodes(), inf);
    label.assign(lat.nodes(), -1);
    std::vector<char> done(lat.nodes(), 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    for (const auto& [s, lab] : sources) {
        dist[s] = 0;
        label[s] = lab;
        queue.push({0.0, s});
    }
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (done[u]) continue;
        if (d > cutoff) break;
        done[u] = 1;
        const int iy = static_cast<int>(u / lat.NX) + lat.y_lo;
        const int ix = static_cast<int>(u % lat.NX) + lat.x_lo;
        for (const auto& o : kOffsets) {
            const int jx = ix + o[0], jy = iy + o[1];
            if (!lat.inside(jx, jy)) continue;
            const std::size_t v = lat.id(jx, jy);
            if (done[v]) continue;
            const double nd = d + lat.edge(ix, iy, jx, jy);
            if (nd < dist[v]) {
                dist[v] = nd;
                label[v] = label[u];
                queue.push({nd, v});
            }
        }
    }
}

} // namespace

// The class infimum is over all loops, not loops through a fixed basepoint,
// so the oracle minimizes d(b, b + shift) over basepoints b on a transverse
// cut. A multi-source pass gives open-path lower bounds per cut node; per-
// basepoint passes then run in ascending order of that bound until the best
// closed loop undercuts the remaining bounds, which certifies optimality on
// the lattice.
double dijkstra_cover_oracle(WindingClass w, const SurfaceMetric& m,
                             const DijkstraOptions& opts) {
    if (w.trivial()) throw std::invalid_argument("dijkstra oracle: trivial winding");

    // cut transverse to the winding: vertical column for p != 0, else a row
    const bool cut_in_y = (w.p != 0);

    Lattice lat;
    lat.m = &m;
    lat.nx = m.nx * opts.refine;
    lat.ny = m.ny * opts.refine;
    lat.hx = m.lx / lat.nx;
    lat.hy = m.ly / lat.ny;
    const int mx = static_cast<int>(std::ceil(opts.margin_periods * lat.nx));
    const int my = static_cast<int>(std::ceil(opts.margin_periods * lat.ny));
    const int sx = w.p * lat.nx, sy = w.q * lat.ny;
    // window covers base cut, translated cut, and margins
    lat.x_lo = std::min(0, sx) - mx;
    lat.x_hi = std::max(0, sx) + (cut_in_y ? mx : lat.nx + mx);
    lat.y_lo = std::min(0, sy) - my;
    lat.y_hi = std::max(0, sy) + (cut_in_y ? lat.ny + my : my);
    lat.NX = lat.x_hi - lat.x_lo + 1;
    lat.NY = lat.y_hi - lat.y_lo + 1;
    if (lat.nodes() > opts.node_cap) {
        const double shrink = std::sqrt(static_cast<double>(opts.node_cap) / lat.nodes());
        throw std::length_error("dijkstra oracle: lattice of " + std::to_string(lat.nodes()) +
                                " nodes exceeds cap; try refine <= " +
                                std::to_string(std::max(1, static_cast<int>(opts.refine * shrink))));
    }

    const int n_cut = cut_in_y ? lat.ny : lat.nx;
    auto cut_node = [&](int j) { return cut_in_y ? lat.id(0, j) : lat.id(j, 0); };
    auto cut_target = [&](int j) {
        return cut_in_y ? lat.id(sx, j + sy) : lat.id(j + sx, sy);
    };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist;
    std::vector<int> label;

    // multi-source lower bounds per cut node
    std::vector<std::pair<std::size_t, int>> sources;
    sources.reserve(n_cut);
    for (int j = 0; j < n_cut; ++j) sources.push_back({cut_node(j), j});
    run_dijkstra(lat, sources, inf, dist, label);

    double best = inf;
    std::vector<std::pair<double, int>> order;
    order.reserve(n_cut);
    for (int j = 0; j < n_cut; ++j) {
        const double d = dist[cut_target(j)];
        if (d == inf) continue;
        order.push_back({d, j});
        if (label[cut_target(j)] == j) best = std::min(best, d); // already a loop
    }
    std::sort(order.begin(), order.end());

    for (const auto& [bound, j] : order) {
        if (bound >= best) break; // remaining bounds certify optimality
        run_dijkstra(lat, {{cut_node(j), j}}, best, dist, label);
        best = std::min(best, dist[cut_target(j)]);
    }
    if (best == inf) throw std::runtime_error("dijkstra oracle: no loop found");
    return best;
}

} // namespace rflab::loops
