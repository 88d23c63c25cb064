#include "rflab/flow/dilate.hpp"

#include <cmath>
#include <stdexcept>

#include "rflab/errors.hpp"
#include "rflab/flow/run.hpp"

namespace rflab::flow {

FlowTrace dilate(const FlowTrace& trace, const DilationSpec& spec) {
    if (!(spec.lambda > 0) || !std::isfinite(spec.lambda))
        throw std::invalid_argument("dilate: lambda must be positive and finite");
    if (trace.size() == 0) throw std::invalid_argument("dilate: empty trace");
    const double t_first = trace.time(0);
    const double t_last = trace.time(trace.size() - 1);
    if (spec.t_j < t_first - 1e-12 || spec.t_j > t_last + 1e-12)
        throw WindowExceeded(t_first, t_last);
    bool matched = false;
    for (std::size_t i = 0; i < trace.size(); ++i)
        if (std::fabs(trace.time(i) - spec.t_j) <= 1e-9 * std::max(1.0, std::fabs(spec.t_j)))
            matched = true;
    if (!matched) throw WindowExceeded(t_first, t_last);

    FlowTrace out;
    out.family = trace.family;
    out.cfg = trace.cfg;
    out.has_form = trace.has_form;
    out.cause = trace.cause;
    out.t_num = spec.lambda * (trace.t_num - spec.t_j);
    out.cfg.t_end = spec.lambda * (trace.cfg.t_end - spec.t_j);

    const double lu = 0.5 * std::log(spec.lambda);
    const double sq = std::sqrt(spec.lambda);
    if (trace.family == Family::Torus) {
        out.diag.columns = torus_diag_columns(trace.has_form);
        for (const auto& s : trace.torus) {
            TorusSnapshot d = s;
            d.t = spec.lambda * (s.t - spec.t_j);
            for (double& x : d.metric.u.v) x += lu;
            out.diag.rows.push_back(torus_diag_row(d, trace.has_form));
            out.torus.push_back(std::move(d));
        }
    } else {
        out.diag.columns = warped_diag_columns(trace.has_form);
        for (const auto& s : trace.warped) {
            WarpedSnapshot d = s;
            d.t = spec.lambda * (s.t - spec.t_j);
            for (double& x : d.metric.phi) x *= sq;
            for (double& x : d.metric.psi) x *= sq;
            out.diag.rows.push_back(warped_diag_row(d, trace.has_form));
            out.warped.push_back(std::move(d));
        }
    }
    return out;
}

} // namespace rflab::flow
