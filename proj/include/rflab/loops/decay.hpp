#pragma once

// Length-decay check along a trace: ell(t)^2 + C_eff t must be
// non-decreasing, with C_eff = (n-1) (measured rotation rate)^2 ell^2
// measured from the frames on the per-snapshot minimizers. On both model
// families the measured rotation rate is ~0, so the check effectively
// asserts that ell is non-decreasing within slack.

#include "rflab/flow/trace.hpp"
#include "rflab/loops/minlen.hpp"

namespace rflab::loops {

struct DecayReport {
    std::vector<double> times, ell, rotation_rate;
    double c_eff = 0;           // (n-1) * max rot^2 * max ell^2
    double worst_violation = 0; // largest run-down of ell^2 + C_eff t
    double fitted_c = 0;        // smallest constant absorbing observed decay
    double slack = 0;
    bool pass = false;
};

DecayReport decay_bound_check(const flow::FlowTrace& trace, WindingClass w,
                              const MinLengthOptions& opts = {}, double rel_slack_rate = 1e-3,
                              int snapshot_stride = 1);

// Surface metric of one snapshot, either family.
SurfaceMetric snapshot_surface(const flow::FlowTrace& trace, std::size_t index);

} // namespace rflab::loops
