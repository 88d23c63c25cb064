#pragma once

// Scalar-curvature comparison and blowup-rate checks from the corollary
// machinery: R_min(t) >= R_0 / (1 - (2/n) R_0 t) by the maximum principle,
// the implied existence bound T <= n / (2 R_0) for R_0 > 0, and the lower
// bound on (T - t) * sup|Rm| for singular traces.

#include <array>
#include <vector>

#include "rflab/flow/trace.hpp"

namespace rflab::flow {

struct RminReport {
    int n = 0;                // dimension entering the comparison ODE
    double r0 = 0;            // R_min at the initial snapshot
    bool strict = false;      // R_0 > 0 (the case the corollary uses)
    double slack = 0;
    std::vector<std::array<double, 3>> rows; // t, r_min, comparison bound
    double worst_violation = 0;              // max over rows of bound - slack - r_min
    bool t_bound_applicable = false;
    double t_bound = 0; // n / (2 R_0)
    bool t_bound_ok = true;
    bool pass = false;
};

RminReport rmin_comparison_check(const FlowTrace& trace, double slack_factor = 1e-3);

struct BlowupReport {
    std::vector<std::array<double, 2>> rows; // t, (T_num - t) * sup_rm
    double constant = 0;                     // inf over sampled late times
    bool pass = false;                       // constant > 0
};

// Throws NotApplicable on non-singular traces.
BlowupReport blowup_rate_check(const FlowTrace& trace);

} // namespace rflab::flow
