#pragma once

// Time-indexed snapshots of a flow plus recomputed diagnostics. Snapshots
// store the full metric (and coupled form/potential) state; diagnostics are
// always derived from snapshots, never interpolated.

#include <vector>

#include "rflab/flow/config.hpp"
#include "rflab/geom/metrics.hpp"
#include "rflab/hodge/oneform.hpp"

namespace rflab::flow {

struct TorusSnapshot {
    double t = 0;
    geom::ConformalTorusMetric metric;
    hodge::OneForm form;      // empty unless the trace is coupled
    geom::Field2 potential;   // gauge function F, mean-zero
};

struct WarpedSnapshot {
    double t = 0;
    geom::WarpedMetric metric;
    std::vector<double> form;      // a(x) with phi = a dx; empty unless coupled
    std::vector<double> potential; // F(x), mean-zero
};

struct FlowTrace {
    Family family = Family::Torus;
    FlowConfig cfg;
    bool has_form = false;

    std::vector<TorusSnapshot> torus;
    std::vector<WarpedSnapshot> warped;

    DiagTable diag;
    TerminationCause cause = TerminationCause::ReachedTEnd;
    double t_num = 0; // estimated maximal time (t_end when non-singular)

    std::size_t size() const {
        return family == Family::Torus ? torus.size() : warped.size();
    }
    double time(std::size_t i) const {
        return family == Family::Torus ? torus[i].t : warped[i].t;
    }
    std::vector<double> times() const {
        std::vector<double> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) out.push_back(time(i));
        return out;
    }
};

struct DilationSpec {
    double lambda = 1.0; // > 0
    double t_j = 0.0;    // must match a sampled time
    int x_j = 0;         // base node; metadata on these compact model families
};

} // namespace rflab::flow
