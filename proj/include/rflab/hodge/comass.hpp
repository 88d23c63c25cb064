#pragma once

// Comass norm N_g of a de Rham class: infimum over representatives of the
// sup norm. Solved by smoothed minimax: minimize the L^{2k} surrogate of
// |base + dF|_g over potentials F for k in {2, 8, 32}, warm-starting each
// level, gradient descent with backtracking line search. The reported value
// is the sup norm of the final iterate (an upper bound); a duality-free
// lower bound comes from the pairing inequality |period| / loop length on
// explicit axis-aligned representatives. The gap is reported, never assumed
// zero.

#include <vector>

#include "rflab/hodge/oneform.hpp"

namespace rflab::hodge {

struct ComassOptions {
    std::vector<int> k_ladder{2, 8, 32};
    double rel_tol = 1e-8;    // per-level relative-decrease stop
    int max_iter_per_k = 3000;
    int log_stride = 25;
    bool harmonic_init = true;       // CG warm start at the harmonic representative
    const Potential* warm_start = nullptr; // overrides harmonic_init when given
};

struct ComassLogRow {
    int iter = 0; // cumulative across levels
    int k = 0;
    double surrogate = 0; // mean(|r|_g^{2k})^(1/2k)
    double sup = 0;
    double gap = 0;
};

struct ComassResult {
    double value = 0;       // certified upper bound (sup norm of final iterate)
    double lower_bound = 0; // pairing / representative-length bound
    double gap = 0;
    Potential minimizer;
    std::vector<ComassLogRow> log;
    bool converged = true;
};

ComassResult comass_norm(const CohomologyClass& cls, const ConformalTorusMetric& m,
                         const ComassOptions& opts = {});

} // namespace rflab::hodge
