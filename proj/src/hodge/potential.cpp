#include "rflab/hodge/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "rflab/flow/run.hpp"
#include "rflab/hodge/dec.hpp"

namespace rflab::hodge {

PotentialTrackResult potential_track(const OneForm& phi0, const flow::FlowTrace& trace,
                                     double tol) {
    if (trace.family != flow::Family::Torus)
        throw std::invalid_argument("potential_track: torus traces only");
    if (trace.torus.empty()) throw std::invalid_argument("potential_track: empty trace");

    const auto replay = flow::run_torus_flow(trace.torus.front().metric, phi0, trace.cfg);

    PotentialTrackResult out;
    for (const auto& snap : replay.torus) {
        out.times.push_back(snap.t);
        Potential pot;
        pot.f = snap.potential;
        DecOperators dec(snap.metric);
        const OneForm df = dec.d0(pot.f);
        double sup = 0;
        for (std::size_t i = 0; i < df.p.v.size(); ++i) {
            const double rp = snap.form.p.v[i] - phi0.p.v[i] - df.p.v[i];
            const double rq = snap.form.q.v[i] - phi0.q.v[i] - df.q.v[i];
            sup = std::max(sup, std::exp(-snap.metric.u.v[i]) * std::sqrt(rp * rp + rq * rq));
        }
        out.identity_residual.push_back(sup);
        out.worst_residual = std::max(out.worst_residual, sup);
        out.series.push_back(std::move(pot));
    }
    out.flagged = out.worst_residual > tol;
    return out;
}

} // namespace rflab::hodge
