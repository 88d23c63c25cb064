#pragma once

// Theorem-level assertions over computed traces: the pairing lower bound
// L_alpha(t) >= <Phi, alpha> / N_{g(0)}(Phi), the dilation ladder of the
// corollary machinery, and the battery of monotone quantities.

#include <array>

#include "rflab/flow/dilate.hpp"
#include "rflab/flow/trace.hpp"
#include "rflab/hodge/comass.hpp"
#include "rflab/loops/decay.hpp"
#include "rflab/loops/minlen.hpp"
#include "rflab/monitor/report.hpp"

namespace rflab::monitor {

struct TheoremBundle {
    loops::WindingClass alpha;
    std::array<double, 2> phi_periods{};
    double pairing = 0; // <Phi, alpha>, must be > 0
    double n0 = 0;      // N_{g(0)}(Phi), solver upper value
    double n0_gap = 0;
    double c = 0; // pairing / n0
};

// Computes N_{g(0)} on the initial snapshot (torus: 2-D ladder solver;
// warped: 1-D reduction). Throws std::invalid_argument when the pairing is
// not positive (torsion/trivial case is excluded by the theorem hypothesis).
TheoremBundle make_bundle(const flow::FlowTrace& trace, loops::WindingClass alpha,
                          std::array<double, 2> phi_periods,
                          const hodge::ComassOptions& copts = {});

struct MonitorOptions {
    double supnorm_rate = 1e-3;  // allowed sup-norm increase per unit time
    double comass_slack = 1e-3;  // additive, on top of solver gaps
    double theorem_slack = 1e-2; // relative, criterion 4
    double flat_equality_tol = 1e-3;
    double decay_rate = 1e-3;  // relative per unit time, criterion 5
    double m_slack = 1e-2;     // relative, criterion 6
    double period_rate = 1e-6; // relative per unit time
    double duality_tol = 1e-2; // relative, criterion 6
    double ladder_scaling_tol = 0.02;
    int loop_stride = 0;   // 0: auto, about 16 samples
    int comass_stride = 0; // 0: auto
    int stable_k_max = 4;
    loops::MinLengthOptions loop;
    hodge::ComassOptions comass;
};

struct LengthSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<std::size_t> snapshot_index;
};

// L_alpha on a strided subsample of snapshots, warm-starting each minimizer.
LengthSeries l_alpha_series(const flow::FlowTrace& trace, loops::WindingClass alpha,
                            const MonitorOptions& opts = {});

MonotoneReport main_theorem_check(const flow::FlowTrace& trace, const TheoremBundle& bundle,
                                  const MonitorOptions& opts = {});

struct CorollaryReport {
    std::vector<double> lambdas;
    std::vector<double> l_alpha_dilated;   // recomputed on the scaled snapshots
    std::vector<double> sqrt_scaling_error; // |L_j / (sqrt(lam_j) L(t_j)) - 1|
    std::vector<double> blowup_products;    // T'_num * sup_rm(g_j(0))
    double worst_scaling_error = 0;
    bool growth_monotone = false;
    bool pass = false;
};

// Throws NotApplicable on non-singular traces.
CorollaryReport corollary_check(const flow::FlowTrace& trace, const TheoremBundle& bundle,
                                const std::vector<flow::DilationSpec>& ladder,
                                const MonitorOptions& opts = {});

struct MonitorSuite {
    std::vector<MonotoneReport> reports;
    bool all_pass() const {
        for (const auto& r : reports)
            if (!r.pass) return false;
        return true;
    }
};

// One report per monotone quantity: form sup norm (down), comass (down),
// m_g estimate (up), ell^2 + C_eff t (up), periods (constant), plus the
// theorem ratio and the duality bound m_g N_g >= pairing.
MonitorSuite track_monotones(const flow::FlowTrace& trace, const TheoremBundle& bundle,
                             const MonitorOptions& opts = {});

} // namespace rflab::monitor
