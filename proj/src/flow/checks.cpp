#include "rflab/flow/checks.hpp"

#include <algorithm>
#include <cmath>

#include "rflab/errors.hpp"

namespace rflab::flow {

RminReport rmin_comparison_check(const FlowTrace& trace, double slack_factor) {
    RminReport rep;
    rep.n = trace.family == Family::Torus ? 2 : trace.warped.front().metric.n;
    const auto times = trace.diag.series("t");
    const auto rmin = trace.diag.series("r_min");
    const auto suprm = trace.diag.series("sup_rm");
    if (times.empty()) return rep;
    rep.r0 = rmin.front();
    rep.strict = rep.r0 > 0;
    rep.slack = slack_factor * std::max({std::fabs(rep.r0), suprm.front(), 1e-9});

    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double denom = 1.0 - (2.0 / rep.n) * rep.r0 * t;
        if (denom <= 0) break; // comparison solution has blown up; bound vacuous past here
        const double bound = rep.r0 / denom;
        rep.rows.push_back({t, rmin[i], bound});
        rep.worst_violation = std::max(rep.worst_violation, bound - rep.slack - rmin[i]);
    }
    rep.pass = rep.worst_violation <= 0;

    if (rep.strict) {
        rep.t_bound_applicable = true;
        rep.t_bound = rep.n / (2.0 * rep.r0);
        rep.t_bound_ok = trace.t_num <= rep.t_bound * (1.0 + 10 * slack_factor);
        rep.pass = rep.pass && rep.t_bound_ok;
    }
    return rep;
}

BlowupReport blowup_rate_check(const FlowTrace& trace) {
    if (trace.cause != TerminationCause::SingularityImminent)
        throw NotApplicable("blowup_rate_check: trace did not terminate at a singularity");
    BlowupReport rep;
    const auto times = trace.diag.series("t");
    const auto suprm = trace.diag.series("sup_rm");
    const std::size_t n = times.size();
    const std::size_t late = std::max<std::size_t>(3, n / 4);
    bool first = true;
    for (std::size_t i = n - std::min(late, n); i < n; ++i) {
        if (times[i] >= trace.t_num) continue;
        const double prod = (trace.t_num - times[i]) * suprm[i];
        rep.rows.push_back({times[i], prod});
        if (first) {
            rep.constant = prod;
            first = false;
        } else {
            rep.constant = std::min(rep.constant, prod);
        }
    }
    rep.pass = !rep.rows.empty() && rep.constant > 0;
    return rep;
}

} // namespace rflab::flow
