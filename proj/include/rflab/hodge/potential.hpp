#pragma once

// Gauge-potential tracking: integrate dF/dt = scalar_laplacian(F) -
// codifferential(phi_0) alongside the metric flow and verify the identity
// phi(t) = phi_0 + dF(t) against the independently evolved 1-form heat flow.
// The metric evolution is replayed deterministically from the trace's config
// and initial snapshot. A residual above tolerance flags an
// operator-convention inconsistency.

#include <vector>

#include "rflab/flow/trace.hpp"
#include "rflab/hodge/oneform.hpp"

namespace rflab::hodge {

struct PotentialTrackResult {
    std::vector<double> times;
    std::vector<Potential> series;
    std::vector<double> identity_residual; // sup |phi - phi_0 - dF|_g per sample
    double worst_residual = 0;
    bool flagged = false;
};

PotentialTrackResult potential_track(const OneForm& phi0, const flow::FlowTrace& trace,
                                     double tol = 5e-3);

} // namespace rflab::hodge
