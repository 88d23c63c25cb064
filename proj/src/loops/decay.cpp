#include "rflab/loops/decay.hpp"

#include <cmath>

#include "rflab/loops/frame.hpp"

namespace rflab::loops {

SurfaceMetric snapshot_surface(const flow::FlowTrace& trace, std::size_t index) {
    if (trace.family == flow::Family::Torus)
        return SurfaceMetric::from_torus(trace.torus[index].metric);
    return SurfaceMetric::from_warped(trace.warped[index].metric);
}

DecayReport decay_bound_check(const flow::FlowTrace& trace, WindingClass w,
                              const MinLengthOptions& opts, double rel_slack_rate,
                              int snapshot_stride) {
    DecayReport rep;
    const int n_amb = trace.family == flow::Family::Torus ? 2 : trace.warped.front().metric.n;

    MinLengthOptions local = opts;
    LoopPolyline warm;
    bool have_warm = false;
    for (std::size_t i = 0; i < trace.size(); i += snapshot_stride) {
        const auto sm = snapshot_surface(trace, i);
        if (have_warm) {
            local.warm_start = &warm;
            local.multistart = std::min(opts.multistart, 2);
        }
        const auto ml = min_length(w, sm, local);
        rep.times.push_back(trace.time(i));
        rep.ell.push_back(ml.value);
        double rot = 0;
        // frame on the certified minimizer; loose residual gate since the
        // rotation rate is a diagnostic here
        try {
            rot = build_frame(ml.minimizer, sm, 10 * opts.shorten.residual_tol).rotation_rate;
        } catch (const std::invalid_argument&) {
            rot = 0;
        }
        rep.rotation_rate.push_back(rot);
        warm = ml.minimizer;
        have_warm = true;
    }

    double max_rot = 0, max_ell = 0;
    for (std::size_t i = 0; i < rep.ell.size(); ++i) {
        max_rot = std::max(max_rot, rep.rotation_rate[i]);
        max_ell = std::max(max_ell, rep.ell[i]);
    }
    rep.c_eff = (n_amb - 1) * max_rot * max_rot * max_ell * max_ell;

    const double duration =
        rep.times.empty() ? 0 : (rep.times.back() - rep.times.front());
    rep.slack = rel_slack_rate * rep.ell.front() * rep.ell.front() * std::max(duration, 1.0);

    double running_max = -1e300;
    for (std::size_t i = 0; i < rep.ell.size(); ++i) {
        const double s = rep.ell[i] * rep.ell[i] + rep.c_eff * rep.times[i];
        rep.worst_violation = std::max(rep.worst_violation, running_max - s);
        running_max = std::max(running_max, s);
        for (std::size_t j = 0; j < i; ++j) {
            const double dt = rep.times[i] - rep.times[j];
            if (dt > 1e-12)
                rep.fitted_c = std::max(
                    rep.fitted_c,
                    (rep.ell[j] * rep.ell[j] - rep.ell[i] * rep.ell[i]) / dt);
        }
    }
    rep.pass = rep.worst_violation <= rep.slack;
    return rep;
}

} // namespace rflab::loops
