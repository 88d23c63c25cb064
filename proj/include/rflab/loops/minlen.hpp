#pragma once

// ell_g(Gamma): best of multistart shortening, cross-checked against the
// Dijkstra cover oracle; and the stable-norm estimate m_g from the k-fold
// covers (min over computed k, which subadditivity makes the best certified
// value at desk scale).

#include <cstdint>

#include "rflab/loops/dijkstra.hpp"
#include "rflab/loops/shorten.hpp"

namespace rflab::loops {

struct MinLengthOptions {
    int multistart = 8; // axis-aligned offsets plus seeded perturbations
    int vertices = 0;   // 0: 64 * (|p| + |q|) clamped to [64, 512]
    std::uint64_t seed = 12345;
    ShortenOptions shorten;
    DijkstraOptions dijkstra;
    bool run_oracle = true;
    double flag_threshold = 0.05;
    const LoopPolyline* warm_start = nullptr;
};

struct MinLengthResult {
    double value = 0;
    double shorten_value = 0;
    double oracle_value = 0; // NaN when the oracle is skipped
    double discrepancy = 0;  // |shorten - oracle| / value
    bool flagged = false;
    LoopPolyline minimizer;
    double residual = 0;
};

MinLengthResult min_length(WindingClass w, const SurfaceMetric& m,
                           const MinLengthOptions& opts = {});

struct StableNormResult {
    std::vector<int> ks;
    std::vector<double> ell;      // ell(k Gamma)
    std::vector<double> per_k;    // ell(k Gamma)/k
    double estimate = 0;          // min over computed k
};

StableNormResult stable_norm(WindingClass w, const SurfaceMetric& m, int k_max = 8,
                             const MinLengthOptions& opts = {});

} // namespace rflab::loops
