#include "rflab/monitor/checks.hpp"

#include <cmath>
#include <stdexcept>

#include "rflab/errors.hpp"
#include "rflab/hodge/warped_forms.hpp"

namespace rflab::monitor {

using flow::Family;
using flow::FlowTrace;

MonotoneReport check_monotone(std::string quantity, std::vector<double> times,
                              std::vector<double> values, Direction dir, double slack) {
    MonotoneReport rep;
    rep.quantity = std::move(quantity);
    rep.times = std::move(times);
    rep.values = std::move(values);
    rep.slack = slack;
    double worst = 0;
    if (dir == Direction::Constant) {
        for (double v : rep.values) worst = std::max(worst, std::fabs(v - rep.values.front()));
    } else {
        double extreme = rep.values.empty() ? 0 : rep.values.front();
        for (double v : rep.values) {
            if (dir == Direction::NonIncreasing) {
                worst = std::max(worst, v - extreme);
                extreme = std::min(extreme, v);
            } else {
                worst = std::max(worst, extreme - v);
                extreme = std::max(extreme, v);
            }
        }
    }
    rep.worst_violation = worst;
    rep.pass = worst <= slack;
    return rep;
}

namespace {

int auto_stride(std::size_t n, int requested) {
    if (requested > 0) return requested;
    return std::max(1, static_cast<int>(n / 16));
}

double duration(const FlowTrace& tr) {
    return tr.size() < 2 ? 1.0 : std::max(1e-12, tr.time(tr.size() - 1) - tr.time(0));
}

} // namespace

TheoremBundle make_bundle(const FlowTrace& trace, loops::WindingClass alpha,
                          std::array<double, 2> phi_periods, const hodge::ComassOptions& copts) {
    TheoremBundle b;
    b.alpha = alpha;
    b.phi_periods = phi_periods;
    if (trace.family == Family::Torus) {
        b.pairing = alpha.p * phi_periods[0] + alpha.q * phi_periods[1];
    } else {
        b.pairing = alpha.p * phi_periods[0];
    }
    if (!(b.pairing > 0))
        throw std::invalid_argument(
            "make_bundle: pairing <Phi, alpha> must be positive (nonzero winding required)");
    if (trace.family == Family::Torus) {
        const auto& m0 = trace.torus.front().metric;
        const auto cls = hodge::make_class(m0.grid(), phi_periods[0], phi_periods[1]);
        const auto res = hodge::comass_norm(cls, m0, copts);
        b.n0 = res.value;
        b.n0_gap = res.gap;
    } else {
        const auto res = hodge::warped_comass(phi_periods[0], trace.warped.front().metric);
        b.n0 = res.value;
        b.n0_gap = res.gap;
    }
    b.c = b.pairing / b.n0;
    return b;
}

LengthSeries l_alpha_series(const FlowTrace& trace, loops::WindingClass alpha,
                            const MonitorOptions& opts) {
    LengthSeries out;
    const int stride = auto_stride(trace.size(), opts.loop_stride);
    loops::MinLengthOptions lo = opts.loop;
    loops::LoopPolyline warm;
    bool have_warm = false;
    for (std::size_t i = 0; i < trace.size(); i += stride) {
        const auto sm = loops::snapshot_surface(trace, i);
        if (have_warm) {
            lo.warm_start = &warm;
            lo.multistart = std::min(opts.loop.multistart, 2);
        }
        const auto r = loops::min_length(alpha, sm, lo);
        out.times.push_back(trace.time(i));
        out.values.push_back(r.value);
        out.snapshot_index.push_back(i);
        warm = r.minimizer;
        have_warm = true;
    }
    return out;
}

MonotoneReport main_theorem_check(const FlowTrace& trace, const TheoremBundle& bundle,
                                  const MonitorOptions& opts) {
    if (bundle.alpha.trivial())
        throw std::invalid_argument("main_theorem_check: zero winding is excluded");
    const auto series = l_alpha_series(trace, bundle.alpha, opts);
    MonotoneReport rep;
    rep.quantity = "theorem_main_ratio";
    rep.times = series.times;
    for (double l : series.values) rep.values.push_back(l * bundle.n0 / bundle.pairing);
    double worst = 0;
    for (double r : rep.values) worst = std::max(worst, 1.0 - r);
    rep.worst_violation = worst;
    rep.slack = opts.theorem_slack;
    rep.pass = worst <= rep.slack;
    rep.note = "min_t L_alpha(t) * N0 / pairing vs 1";
    return rep;
}

CorollaryReport corollary_check(const FlowTrace& trace, const TheoremBundle& bundle,
                                const std::vector<flow::DilationSpec>& ladder,
                                const MonitorOptions& opts) {
    if (trace.cause != flow::TerminationCause::SingularityImminent)
        throw NotApplicable("corollary_check: needs a singular trace");
    CorollaryReport rep;
    loops::MinLengthOptions lo = opts.loop;
    for (const auto& spec : ladder) {
        const auto dilated = flow::dilate(trace, spec);
        // snapshot at dilated time 0 (= the t_j snapshot)
        std::size_t j0 = 0;
        for (std::size_t i = 0; i < dilated.size(); ++i)
            if (std::fabs(dilated.time(i)) < std::fabs(dilated.time(j0))) j0 = i;
        const auto sm_dilated = loops::snapshot_surface(dilated, j0);
        const auto sm_orig = loops::snapshot_surface(trace, j0);
        const double l_dil = loops::min_length(bundle.alpha, sm_dilated, lo).value;
        const double l_orig = loops::min_length(bundle.alpha, sm_orig, lo).value;
        rep.lambdas.push_back(spec.lambda);
        rep.l_alpha_dilated.push_back(l_dil);
        const double expected = std::sqrt(spec.lambda) * l_orig;
        rep.sqrt_scaling_error.push_back(std::fabs(l_dil / expected - 1.0));
        const auto suprm = dilated.diag.series("sup_rm");
        rep.blowup_products.push_back(dilated.t_num * suprm[j0]);
    }
    for (double e : rep.sqrt_scaling_error)
        rep.worst_scaling_error = std::max(rep.worst_scaling_error, e);
    rep.growth_monotone = true;
    for (std::size_t i = 1; i < rep.l_alpha_dilated.size(); ++i)
        if (rep.l_alpha_dilated[i] <= rep.l_alpha_dilated[i - 1] * (1 - 1e-9))
            rep.growth_monotone = false;
    rep.pass = rep.growth_monotone && rep.worst_scaling_error <= opts.ladder_scaling_tol;
    return rep;
}

MonitorSuite track_monotones(const FlowTrace& trace, const TheoremBundle& bundle,
                             const MonitorOptions& opts) {
    MonitorSuite suite;
    const double dur = duration(trace);
    const auto times = trace.diag.series("t");

    // 1. sup norm of the coupled form, non-increasing
    if (trace.has_form) {
        suite.reports.push_back(check_monotone("form_sup_norm", times,
                                               trace.diag.series("form_sup"),
                                               Direction::NonIncreasing,
                                               opts.supnorm_rate * dur));
    }

    // 2. comass snapshots, non-increasing within solver gap + slack
    {
        std::vector<double> ct, cv;
        double max_gap = bundle.n0_gap;
        const int stride = auto_stride(trace.size(), opts.comass_stride);
        if (trace.family == Family::Torus) {
            hodge::ComassOptions co = opts.comass;
            hodge::Potential warm;
            bool have_warm = false;
            for (std::size_t i = 0; i < trace.size(); i += stride) {
                const auto& snap = trace.torus[i];
                const auto cls = hodge::make_class(snap.metric.grid(), bundle.phi_periods[0],
                                                   bundle.phi_periods[1]);
                if (have_warm) co.warm_start = &warm;
                const auto res = hodge::comass_norm(cls, snap.metric, co);
                ct.push_back(snap.t);
                cv.push_back(res.value);
                max_gap = std::max(max_gap, res.gap);
                warm = res.minimizer;
                have_warm = true;
            }
        } else {
            for (std::size_t i = 0; i < trace.size(); i += stride) {
                const auto& snap = trace.warped[i];
                const auto res = hodge::warped_comass(bundle.phi_periods[0], snap.metric);
                ct.push_back(snap.t);
                cv.push_back(res.value);
                max_gap = std::max(max_gap, res.gap);
            }
        }
        auto rep = check_monotone("comass", std::move(ct), std::move(cv),
                                  Direction::NonIncreasing, opts.comass_slack + max_gap);
        rep.note = "slack includes max solver gap " + std::to_string(max_gap);
        suite.reports.push_back(std::move(rep));
    }

    // 3+4. ell^2 + C_eff t non-decreasing and m_g estimate non-decreasing
    {
        const int stride = auto_stride(trace.size(), opts.loop_stride);
        const auto decay =
            loops::decay_bound_check(trace, bundle.alpha, opts.loop, opts.decay_rate, stride);
        std::vector<double> s;
        for (std::size_t i = 0; i < decay.ell.size(); ++i)
            s.push_back(decay.ell[i] * decay.ell[i] + decay.c_eff * decay.times[i]);
        auto rep = check_monotone("length_sq_decay", decay.times, std::move(s),
                                  Direction::NonDecreasing, decay.slack);
        rep.note = "C_eff = " + std::to_string(decay.c_eff) +
                   ", max rotation rate = " +
                   std::to_string(decay.rotation_rate.empty() ? 0.0
                                                              : *std::max_element(
                                                                    decay.rotation_rate.begin(),
                                                                    decay.rotation_rate.end()));
        suite.reports.push_back(std::move(rep));

        std::vector<double> mt, mv;
        double duality_worst = 0;
        loops::MinLengthOptions lo = opts.loop;
        for (std::size_t i = 0; i < trace.size(); i += stride * 2) {
            const auto sm = loops::snapshot_surface(trace, i);
            const auto sn = loops::stable_norm(bundle.alpha, sm, opts.stable_k_max, lo);
            mt.push_back(trace.time(i));
            mv.push_back(sn.estimate);
            // duality: m_g N_g >= pairing (N from the initial comass; later
            // comass values are reported but never used in bounds)
            const double lhs = sn.estimate * bundle.n0;
            duality_worst = std::max(duality_worst, (bundle.pairing - lhs) / bundle.pairing);
        }
        auto mrep = check_monotone("stable_norm_estimate", std::move(mt), std::move(mv),
                                   Direction::NonDecreasing,
                                   opts.m_slack * (bundle.c > 0 ? bundle.c : 1.0));
        suite.reports.push_back(std::move(mrep));

        MonotoneReport drep;
        drep.quantity = "duality_pairing_bound";
        drep.worst_violation = duality_worst;
        drep.slack = opts.duality_tol;
        drep.pass = duality_worst <= opts.duality_tol;
        drep.note = "1 - m_g N_g / pairing over sampled snapshots";
        suite.reports.push_back(std::move(drep));
    }

    // 5. periods constant
    if (trace.has_form) {
        const auto cols = trace.family == Family::Torus
                              ? std::vector<std::string>{"period_x", "period_y"}
                              : std::vector<std::string>{"form_period"};
        for (const auto& col : cols) {
            const auto vals = trace.diag.series(col);
            const double scale = std::max(1e-12, std::fabs(vals.front()));
            suite.reports.push_back(check_monotone("period_" + col, times, vals,
                                                   Direction::Constant,
                                                   opts.period_rate * dur * scale));
        }
    }

    // 6. theorem ratio
    suite.reports.push_back(main_theorem_check(trace, bundle, opts));
    return suite;
}

} // namespace rflab::monitor
