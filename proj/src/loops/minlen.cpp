#include "rflab/loops/minlen.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace rflab::loops {

namespace {

int default_vertices(WindingClass w) {
    const int n = 64 * std::max(1, std::abs(w.p) + std::abs(w.q));
    return std::min(512, std::max(64, n));
}

// k-fold cover of a loop: concatenate translated copies.
LoopPolyline cover(const LoopPolyline& c, int k, const SurfaceMetric& m) {
    LoopPolyline out;
    out.w = c.w.times(k);
    const int ns = c.segments();
    out.v.reserve(static_cast<std::size_t>(ns) * k + 1);
    for (int copy = 0; copy < k; ++copy) {
        const double ox = copy * c.w.p * m.lx, oy = copy * c.w.q * m.ly;
        for (int i = 0; i < ns; ++i)
            out.v.push_back({c.v[i][0] + ox, c.v[i][1] + oy});
    }
    out.v.push_back({c.v.front()[0] + out.w.p * m.lx, c.v.front()[1] + out.w.q * m.ly});
    return out;
}

// concatenation of loops a then b (translated to a's endpoint through a
// connecting segment); a genuine representative of the winding sum
LoopPolyline concat(const LoopPolyline& a, const LoopPolyline& b, const SurfaceMetric& m) {
    LoopPolyline out;
    out.w = {a.w.p + b.w.p, a.w.q + b.w.q};
    const double ox = a.v.front()[0] + a.w.p * m.lx - b.v.front()[0];
    const double oy = a.v.front()[1] + a.w.q * m.ly - b.v.front()[1];
    for (int i = 0; i < a.segments(); ++i) out.v.push_back(a.v[i]);
    out.v.push_back({a.v.front()[0] + a.w.p * m.lx, a.v.front()[1] + a.w.q * m.ly});
    for (int i = 1; i < b.segments(); ++i)
        out.v.push_back({b.v[i][0] + ox, b.v[i][1] + oy});
    out.v.push_back({a.v.front()[0] + out.w.p * m.lx, a.v.front()[1] + out.w.q * m.ly});
    return out;
}

} // namespace

MinLengthResult min_length(WindingClass w, const SurfaceMetric& m, const MinLengthOptions& opts) {
    if (w.trivial()) throw std::invalid_argument("min_length: trivial winding");
    const int verts = opts.vertices > 0 ? opts.vertices : default_vertices(w);

    std::vector<LoopPolyline> seeds;
    const int axis_starts = std::min(4, std::max(1, opts.multistart));
    for (int s = 0; s < axis_starts; ++s) {
        const double off = static_cast<double>(s) / axis_starts;
        seeds.push_back(make_straight_loop(m, w, {0.0, off * m.ly}, verts));
        if (w.p == 0) seeds.back() = make_straight_loop(m, w, {off * m.lx, 0.0}, verts);
    }
    std::mt19937_64 eng(opts.seed);
    auto sym = [&] { return 2.0 * (eng() >> 11) * 0x1.0p-53 - 1.0; };
    for (int s = axis_starts; s < opts.multistart; ++s) {
        LoopPolyline c = make_straight_loop(m, w, {sym() * m.lx, sym() * m.ly}, verts);
        const double a1 = 0.15 * m.ly * sym(), a2 = 0.15 * m.ly * sym();
        for (int i = 1; i < verts; ++i) {
            const double t = static_cast<double>(i) / verts;
            c.v[i][1] += a1 * std::sin(2 * 3.14159265358979323846 * t) +
                         a2 * std::sin(4 * 3.14159265358979323846 * t);
        }
        seeds.push_back(std::move(c));
    }
    if (opts.warm_start) seeds.push_back(*opts.warm_start);

    MinLengthResult res;
    res.shorten_value = std::numeric_limits<double>::infinity();
    ShortenOptions sopts = opts.shorten;
    sopts.vertices = verts;
    for (const auto& seed : seeds) {
        const auto sr = shorten_loop(seed, m, sopts);
        if (sr.length < res.shorten_value) {
            res.shorten_value = sr.length;
            res.minimizer = sr.loop;
            res.residual = sr.residual;
        }
    }

    if (opts.run_oracle) {
        res.oracle_value = dijkstra_cover_oracle(w, m, opts.dijkstra);
        res.value = std::min(res.shorten_value, res.oracle_value);
        res.discrepancy = std::fabs(res.shorten_value - res.oracle_value) / res.value;
        res.flagged = res.discrepancy > opts.flag_threshold;
    } else {
        res.oracle_value = std::numeric_limits<double>::quiet_NaN();
        res.value = res.shorten_value;
    }
    return res;
}

StableNormResult stable_norm(WindingClass w, const SurfaceMetric& m, int k_max,
                             const MinLengthOptions& opts) {
    if (k_max < 4) throw std::invalid_argument("stable_norm: k_max must be >= 4");
    StableNormResult out;
    MinLengthOptions o1 = opts;
    const auto base = min_length(w, m, o1);
    out.ks.push_back(1);
    out.ell.push_back(base.value);
    out.per_k.push_back(base.value);
    out.estimate = base.value;
    std::vector<LoopPolyline> minimizers{base.minimizer};
    for (int k = 2; k <= k_max; ++k) {
        MinLengthOptions ok = opts;
        // warm start at the k-fold cover of the base minimizer; keep a couple
        // of fresh seeds for escapes
        const LoopPolyline covered = cover(base.minimizer, k, m);
        ok.warm_start = &covered;
        ok.multistart = std::min(opts.multistart, 3);
        const auto r = min_length(w.times(k), m, ok);
        // concatenations of earlier minimizers are genuine representatives,
        // so the reported values inherit subadditivity exactly
        double best = r.value;
        for (int j = 1; j <= k / 2; ++j) {
            const auto cat = concat(minimizers[j - 1], minimizers[k - j - 1], m);
            best = std::min(best, loop_length(cat, m));
        }
        out.ks.push_back(k);
        out.ell.push_back(best);
        out.per_k.push_back(best / k);
        out.estimate = std::min(out.estimate, best / k);
        minimizers.push_back(r.minimizer);
    }
    return out;
}

} // namespace rflab::loops
