#pragma once

// Identity and axiom checks for the form calculus.

#include <span>
#include <vector>

#include "rflab/hodge/comass.hpp"
#include "rflab/hodge/dec.hpp"

namespace rflab::hodge {

struct WeitzenbockReport {
    double sup_residual = 0; // sup_x |hodge_lap phi - (rough_lap phi - K phi)|_g
};

// On a surface R_i^j = K delta_i^j, so the identity reads
// hodge_laplacian(phi) = rough_laplacian(phi) - K phi.
WeitzenbockReport weitzenbock_check(const ConformalTorusMetric& m, const OneForm& phi);

struct NormAxiomReport {
    struct Row {
        std::string check;
        double violation = 0; // signed; <= tol passes
    };
    std::vector<Row> rows;
    double worst_violation = 0;
    double positivity_margin = 0; // min lower bound over nonzero classes
    bool pass = false;
};

// Homogeneity N(c Phi) = |c| N(Phi), triangle inequality, and positivity via
// the pairing lower bound, all within tol plus the solver gaps.
NormAxiomReport norm_axiom_check(const ConformalTorusMetric& m,
                                 std::span<const CohomologyClass> classes, double tol,
                                 const ComassOptions& opts = {});

} // namespace rflab::hodge
