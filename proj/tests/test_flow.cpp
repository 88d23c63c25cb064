#include <doctest.h>

#include <cmath>

#include "rflab/errors.hpp"
#include "rflab/flow/checks.hpp"
#include "rflab/flow/dilate.hpp"
#include "rflab/flow/run.hpp"
#include "rflab/flow/soliton.hpp"
#include "rflab/flow/stepping.hpp"
#include "rflab/hodge/potential.hpp"
#include "support.hpp"

using namespace rflab;
using namespace rflab::flow;
using namespace testsupport;

using geom::flat_torus;

namespace {

geom::ConformalTorusMetric sine_bump_torus(int n, double amp) {
    auto m = flat_torus(n, n, 2 * kPi, 2 * kPi);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            m.u.raw(i, j) = amp * std::sin(m.grid().x(i)) * std::cos(m.grid().y(j));
    return m;
}

geom::WarpedMetric neck_metric(int nx, double amp) {
    geom::WarpedMetric m;
    m.n = 3;
    m.nx = nx;
    m.period = 2 * kPi;
    m.phi.assign(nx, 1.0);
    m.psi.resize(nx);
    for (int i = 0; i < nx; ++i) m.psi[i] = 1.0 - amp * std::cos(2 * kPi * i / nx);
    return m;
}

} // namespace

TEST_CASE("flat and constant conformal factors are stationary") {
    auto m = flat_torus(32, 32, 2 * kPi, 2 * kPi);
    auto out = step_torus_flow(m, 1e-3);
    CHECK(out.u.at(3, 4) == 0.0);

    for (double& x : m.u.v) x = 0.37;
    out = step_torus_flow(m, 1e-3);
    CHECK(out.u.at(3, 4) == 0.37);
}

TEST_CASE("one torus step conserves total area to 1e-8 relative") {
    auto m = flat_torus(128, 128, 2 * kPi, 2 * kPi);
    for (int j = 0; j < 128; ++j)
        for (int i = 0; i < 128; ++i) m.u.raw(i, j) = 0.1 * std::sin(m.grid().x(i));
    const double a0 = m.total_area();
    // largest CFL-admissible step on this grid (~4.9e-4)
    const auto out = step_torus_flow(m, torus_dt_bound(m));
    CHECK(std::fabs(out.total_area() - a0) <= 1e-8 * a0);
}

TEST_CASE("step rejection carries the admissible dt") {
    auto m = flat_torus(32, 32, 2 * kPi, 2 * kPi);
    const double bound = torus_dt_bound(m);
    try {
        step_torus_flow(m, 10 * bound);
        FAIL("expected StepRejected");
    } catch (const StepRejected& e) {
        CHECK(e.admissible_dt == doctest::Approx(bound));
    }
}

TEST_CASE("flat torus trace stays identically flat") {
    FlowConfig cfg;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 200;
    auto tr = run_torus_flow(flat_torus(32, 32, 2 * kPi, 2 * kPi), cfg);
    CHECK(tr.cause == TerminationCause::ReachedTEnd);
    for (const auto& s : tr.torus) CHECK(geom::field_max_abs(s.metric.u) == 0.0);
    CHECK(tr.times().back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("traces are bit-deterministic") {
    FlowConfig cfg;
    cfg.t_end = 0.05;
    cfg.snapshot_stride = 20;
    auto m = sine_bump_torus(48, 0.3);
    auto t1 = run_torus_flow(m, cfg);
    auto t2 = run_torus_flow(m, cfg);
    REQUIRE(t1.size() == t2.size());
    for (std::size_t k = 0; k < t1.size(); ++k) {
        CHECK(t1.torus[k].t == t2.torus[k].t);
        CHECK(t1.torus[k].metric.u.v == t2.torus[k].metric.u.v);
    }
}

TEST_CASE("bumpy torus flow flattens: sup|K| decreases over unit time") {
    FlowConfig cfg;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 500;
    auto tr = run_torus_flow(sine_bump_torus(64, 0.3), cfg);
    const auto suprm = tr.diag.series("sup_rm");
    CHECK(suprm.back() < 0.2 * suprm.front());
    const auto area = tr.diag.series("area");
    CHECK(area.back() == doctest::Approx(area.front()).epsilon(1e-10));
}

TEST_CASE("cylinder solution: psi^2 = 1 - 2t to 1e-4 at t = 0.2") {
    FlowConfig cfg;
    cfg.dt_init = 1e-4;
    cfg.t_end = 0.2;
    cfg.snapshot_stride = 500;
    auto tr = run_warped_flow(cylinder_soliton(3, 1.0, 0.0), cfg);
    CHECK(tr.cause == TerminationCause::ReachedTEnd);
    const auto& last = tr.warped.back();
    CHECK(last.t == doctest::Approx(0.2).epsilon(1e-12));
    for (double psi : last.metric.psi)
        CHECK(std::fabs(psi * psi - (1.0 - 2 * 0.2)) < 1e-4);
}

TEST_CASE("product structure is preserved: constant phi stays constant") {
    geom::WarpedMetric m;
    m.n = 3;
    m.nx = 64;
    m.period = 2 * kPi;
    m.phi.assign(64, 1.3);
    m.psi.assign(64, 0.9);
    const auto out = step_warped_flow(m, 1e-4);
    for (double x : out.phi) CHECK(x == 1.3);
}

TEST_CASE("cylinder vanishing time recovered within 1%") {
    FlowConfig cfg;
    cfg.dt_init = 1e-4;
    cfg.t_end = 1.0; // past the singularity; run stops at the floor
    cfg.snapshot_stride = 200;
    auto tr = run_warped_flow(cylinder_soliton(3, 1.0, 0.0), cfg);
    CHECK(tr.cause == TerminationCause::SingularityImminent);
    CHECK(std::fabs(tr.t_num - 0.5) < 0.005);
}

TEST_CASE("neckpinch: psi_min decreases and the floor fires before non-finite values") {
    FlowConfig cfg;
    cfg.dt_init = 5e-4;
    cfg.t_end = 2.0;
    cfg.snapshot_stride = 100;
    auto tr = run_warped_flow(neck_metric(128, 0.5), cfg);
    CHECK(tr.cause == TerminationCause::SingularityImminent);
    const auto minpsi = tr.diag.series("min_psi");
    for (std::size_t i = 1; i < minpsi.size(); ++i) CHECK(minpsi[i] <= minpsi[i - 1] + 1e-12);
    for (const auto& s : tr.warped) {
        for (double x : s.metric.phi) CHECK(std::isfinite(x));
        for (double x : s.metric.psi) {
            CHECK(std::isfinite(x));
            CHECK(x > 0);
        }
    }
    CHECK(tr.t_num > tr.times().back());
}

TEST_CASE("soliton variants expose both coefficients") {
    auto derived = cylinder_soliton(3, 1.0, 0.25, SolitonVariant::Derived, 64);
    CHECK(derived.psi[0] * derived.psi[0] == doctest::Approx(0.5).epsilon(1e-12));
    // paper variant with psi0^2 = 2(n-1) T, T = 0.25: psi^2(0) = 1
    auto paper = cylinder_soliton(3, 1.0, 0.0, SolitonVariant::Paper, 64);
    CHECK(paper.psi[0] * paper.psi[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cylinder_vanishing_time(3, 1.0, SolitonVariant::Paper) == doctest::Approx(0.25));
    CHECK(cylinder_vanishing_time(3, 1.0, SolitonVariant::Derived) == doctest::Approx(0.5));
    CHECK_THROWS_AS(cylinder_soliton(3, 1.0, 0.5, SolitonVariant::Derived, 64),
                    std::domain_error);
}

TEST_CASE("dilate: identity, scaling, and composition") {
    FlowConfig cfg;
    cfg.dt_init = 1e-3;
    cfg.t_end = 0.1;
    cfg.snapshot_stride = 25;
    auto tr = run_warped_flow(neck_metric(64, 0.3), cfg);

    auto ident = dilate(tr, {1.0, 0.0, 0});
    CHECK(ident.warped.front().metric.psi == tr.warped.front().metric.psi);
    CHECK(ident.t_num == doctest::Approx(tr.t_num));

    auto scaled = dilate(tr, {4.0, 0.0, 0});
    const auto len0 = tr.diag.series("s1_length");
    const auto len1 = scaled.diag.series("s1_length");
    const auto rm0 = tr.diag.series("sup_rm");
    const auto rm1 = scaled.diag.series("sup_rm");
    for (std::size_t i = 0; i < len0.size(); ++i) {
        CHECK(len1[i] == doctest::Approx(2.0 * len0[i]).epsilon(1e-12));
        CHECK(rm1[i] == doctest::Approx(rm0[i] / 4.0).epsilon(1e-12));
    }

    // composition: lambda1 at t1, then lambda2 at the dilated image of t2
    const double t1 = tr.time(1), t2 = tr.time(2);
    auto once = dilate(dilate(tr, {2.0, t1, 0}), {3.0, 2.0 * (t2 - t1), 0});
    auto direct = dilate(tr, {6.0, t2, 0});
    REQUIRE(once.size() == direct.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(once.time(i) == doctest::Approx(direct.time(i)).epsilon(1e-12));
        for (int k = 0; k < 64; ++k)
            CHECK(once.warped[i].metric.psi[k] ==
                  doctest::Approx(direct.warped[i].metric.psi[k]).epsilon(1e-12));
    }

    CHECK_THROWS_AS(dilate(tr, {1.0, 99.0, 0}), WindowExceeded);
}

TEST_CASE("dilated cylinder snapshots converge to a j-independent state") {
    FlowConfig cfg;
    cfg.dt_init = 1e-4;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 100;
    auto tr = run_warped_flow(cylinder_soliton(3, 1.0, 0.0), cfg);
    REQUIRE(tr.cause == TerminationCause::SingularityImminent);
    const double T = tr.t_num;
    std::vector<double> rescaled;
    for (std::size_t j = tr.size() - 6; j < tr.size() - 1; ++j) {
        const double tj = tr.time(j);
        const double lam = 1.0 / (T - tj);
        auto d = dilate(tr, {lam, tj, 0});
        // snapshot at dilated time 0 is index j
        rescaled.push_back(d.warped[j].metric.psi[0]);
    }
    for (double v : rescaled)
        CHECK(v == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3)); // psi^2/(T-t) = 2(n-2)
}

TEST_CASE("R_min comparison: cylinder bound and existence time") {
    FlowConfig cfg;
    cfg.dt_init = 1e-4;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 200;
    auto tr = run_warped_flow(cylinder_soliton(3, 1.0, 0.0), cfg);
    auto rep = rmin_comparison_check(tr);
    CHECK(rep.strict);
    CHECK(rep.r0 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rep.t_bound == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(rep.pass);
    // spot-check the comparison away from the singular endpoint:
    // actual 2/(1-2t) vs bound 2/(1-(4/3)t)
    for (const auto& row : rep.rows) {
        CHECK(row[1] >= row[2] - rep.slack);
        if (row[0] > 0.45) continue;
        const double exact = 2.0 / (1.0 - 2.0 * row[0]);
        CHECK(row[1] == doctest::Approx(exact).epsilon(1e-6));
    }
}

TEST_CASE("R_min comparison: flat torus degenerates to equality at zero") {
    FlowConfig cfg;
    cfg.t_end = 0.2;
    auto tr = run_torus_flow(flat_torus(32, 32, 2 * kPi, 2 * kPi), cfg);
    auto rep = rmin_comparison_check(tr);
    CHECK(!rep.strict);
    CHECK(rep.r0 == 0.0);
    CHECK(rep.pass);
}

TEST_CASE("blowup rate: cylinder constant is 1/(2(n-2)) and dilation invariant") {
    FlowConfig cfg;
    cfg.dt_init = 1e-4;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 100;
    auto tr = run_warped_flow(cylinder_soliton(3, 1.0, 0.0), cfg);
    auto rep = blowup_rate_check(tr);
    CHECK(rep.pass);
    CHECK(rep.constant == doctest::Approx(0.5).epsilon(1e-3));

    const double tj = tr.time(2);
    auto d = dilate(tr, {7.0, tj, 0});
    auto drep = blowup_rate_check(d);
    CHECK(drep.constant == doctest::Approx(rep.constant).epsilon(1e-6));

    FlowConfig short_cfg;
    short_cfg.t_end = 0.05;
    auto flat = run_torus_flow(flat_torus(32, 32, 2 * kPi, 2 * kPi), short_cfg);
    CHECK_THROWS_AS(blowup_rate_check(flat), NotApplicable);
}

TEST_CASE("potential tracking: identity holds to roundoff on flat and evolving metrics") {
    // flat stationary trace, harmonic phi0: F stays 0
    {
        FlowConfig cfg;
        cfg.t_end = 0.1;
        cfg.snapshot_stride = 50;
        auto m = flat_torus(48, 48, 2 * kPi, 2 * kPi);
        hodge::OneForm phi0(m.grid());
        for (double& x : phi0.p.v) x = 1.0;
        auto tr = run_torus_flow(m, cfg);
        auto res = hodge::potential_track(phi0, tr);
        CHECK(!res.flagged);
        CHECK(res.worst_residual < 1e-12);
        for (const auto& pot : res.series) CHECK(geom::field_max_abs(pot.f) < 1e-12);
    }
    // evolving bumpy metric, non-harmonic closed phi0
    {
        FlowConfig cfg;
        cfg.t_end = 0.2;
        cfg.snapshot_stride = 100;
        auto m = sine_bump_torus(48, 0.25);
        hodge::OneForm phi0(m.grid());
        for (int j = 0; j < 48; ++j)
            for (int i = 0; i < 48; ++i) phi0.p.raw(i, j) = 1.0 + 0.3 * std::sin(m.grid().x(i));
        auto tr = run_torus_flow(m, cfg);
        auto res = hodge::potential_track(phi0, tr, 5e-3);
        CHECK(!res.flagged);
        CHECK(res.worst_residual < 1e-10);
    }
}

TEST_CASE("coupled run: sup norm non-increasing, periods exactly conserved") {
    FlowConfig cfg;
    cfg.t_end = 0.5;
    cfg.snapshot_stride = 100;
    auto m = sine_bump_torus(64, 0.3);
    hodge::OneForm phi0(m.grid());
    for (int j = 0; j < 64; ++j)
        for (int i = 0; i < 64; ++i) phi0.p.raw(i, j) = 1.0 + 0.3 * std::sin(m.grid().x(i));
    auto tr = run_torus_flow(m, phi0, cfg);
    const auto sup = tr.diag.series("form_sup");
    for (std::size_t i = 1; i < sup.size(); ++i) CHECK(sup[i] <= sup[i - 1] + 1e-9);
    const auto px = tr.diag.series("period_x");
    for (double v : px) CHECK(v == doctest::Approx(px.front()).epsilon(1e-12));
}
