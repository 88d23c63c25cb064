#include <doctest.h>

#include <cmath>

#include "rflab/errors.hpp"
#include "rflab/flow/run.hpp"
#include "rflab/flow/soliton.hpp"
#include "rflab/monitor/checks.hpp"
#include "support.hpp"

using namespace rflab;
using namespace rflab::monitor;
using namespace testsupport;

using geom::flat_torus;

namespace {

flow::FlowTrace flat_coupled_trace(int n = 48, double t_end = 0.3) {
    auto m = flat_torus(n, n, 2 * kPi, 2 * kPi);
    hodge::OneForm phi0(m.grid());
    for (double& x : phi0.p.v) x = 1.0;
    flow::FlowConfig cfg;
    cfg.t_end = t_end;
    cfg.snapshot_stride = 60;
    return flow::run_torus_flow(m, phi0, cfg);
}

flow::FlowTrace neck_trace(int nx = 128) {
    geom::WarpedMetric m;
    m.n = 3;
    m.nx = nx;
    m.period = 2 * kPi;
    m.phi.assign(nx, 1.0);
    m.psi.resize(nx);
    for (int i = 0; i < nx; ++i) m.psi[i] = 1.0 - 0.5 * std::cos(2 * kPi * i / nx);
    std::vector<double> a0(nx, 1.0);
    flow::FlowConfig cfg;
    cfg.dt_init = 5e-4;
    cfg.t_end = 2.0;
    cfg.snapshot_stride = 200;
    return flow::run_warped_flow(m, a0, cfg);
}

} // namespace

TEST_CASE("check_monotone measures run-ups, run-downs and drift") {
    auto up = check_monotone("q", {0, 1, 2}, {1.0, 1.2, 1.1}, Direction::NonDecreasing, 0.15);
    CHECK(up.worst_violation == doctest::Approx(0.1));
    CHECK(up.pass);
    auto down = check_monotone("q", {0, 1, 2}, {1.0, 1.2, 1.1}, Direction::NonIncreasing, 0.15);
    CHECK(down.worst_violation == doctest::Approx(0.2));
    CHECK(!down.pass);
    auto c = check_monotone("q", {0, 1}, {2.0, 2.3}, Direction::Constant, 0.5);
    CHECK(c.worst_violation == doctest::Approx(0.3));
    CHECK(c.pass);
}

TEST_CASE("flat torus bundle: c = 2 pi and the equality case holds to 1e-3") {
    auto tr = flat_coupled_trace();
    auto bundle = make_bundle(tr, {1, 0}, {2 * kPi, 0.0});
    CHECK(bundle.pairing == doctest::Approx(2 * kPi));
    CHECK(bundle.n0 == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(bundle.c == doctest::Approx(2 * kPi).epsilon(1e-3));

    auto rep = main_theorem_check(tr, bundle);
    CHECK(rep.pass);
    for (double r : rep.values) CHECK(r == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("make_bundle rejects zero pairing") {
    auto tr = flat_coupled_trace(48, 0.05);
    CHECK_THROWS_AS(make_bundle(tr, {0, 0}, {2 * kPi, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_bundle(tr, {0, 1}, {2 * kPi, 0.0}), std::invalid_argument);
}

TEST_CASE("flat torus: every monotone series is constant and passes") {
    auto tr = flat_coupled_trace();
    auto bundle = make_bundle(tr, {1, 0}, {2 * kPi, 0.0});
    MonitorOptions opts;
    opts.loop.multistart = 3;
    auto suite = track_monotones(tr, bundle, opts);
    CHECK(suite.all_pass());
    CHECK(suite.reports.size() >= 6);
    for (const auto& r : suite.reports)
        INFO(r.quantity);
}

TEST_CASE("neckpinch: theorem ratio stays above 1 - 1e-3 and monotones pass") {
    auto tr = neck_trace();
    REQUIRE(tr.cause == flow::TerminationCause::SingularityImminent);
    auto bundle = make_bundle(tr, {1, 0}, {2 * kPi, 0.0});
    // c = pairing / N0 = S^1 arclength of the initial metric
    CHECK(bundle.c == doctest::Approx(tr.warped.front().metric.s1_length()).epsilon(1e-2));

    MonitorOptions opts;
    opts.loop.multistart = 3;
    auto rep = main_theorem_check(tr, bundle, opts);
    CHECK(rep.pass);
    for (double r : rep.values) CHECK(r >= 1.0 - 1e-3);

    auto suite = track_monotones(tr, bundle, opts);
    for (const auto& r : suite.reports) {
        INFO(r.quantity << " violation " << r.worst_violation << " slack " << r.slack);
        CHECK(r.pass);
    }
}

TEST_CASE("corollary ladder: dilated L_alpha grows like sqrt(lambda) on the cylinder") {
    flow::FlowConfig cfg;
    cfg.dt_init = 1e-4;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 300;
    std::vector<double> a0(256, 1.0);
    auto tr = flow::run_warped_flow(flow::cylinder_soliton(3, 1.0, 0.0), a0, cfg);
    REQUIRE(tr.cause == flow::TerminationCause::SingularityImminent);
    auto bundle = make_bundle(tr, {1, 0}, {2 * kPi, 0.0});

    std::vector<flow::DilationSpec> ladder;
    for (std::size_t j = tr.size() - 6; j + 1 < tr.size(); ++j)
        ladder.push_back({1.0 / (tr.t_num - tr.time(j)), tr.time(j), 0});

    MonitorOptions opts;
    opts.loop.multistart = 2;
    auto rep = corollary_check(tr, bundle, ladder, opts);
    CHECK(rep.pass);
    CHECK(rep.worst_scaling_error <= 0.02);
    CHECK(rep.growth_monotone);
    // blowup products stay near the cylinder constant under dilation
    for (double p : rep.blowup_products) CHECK(p == doctest::Approx(0.5).epsilon(0.05));

    // identity dilation leaves L unchanged
    auto ident = corollary_check(tr, bundle, {{1.0, 0.0, 0}}, opts);
    CHECK(ident.sqrt_scaling_error.front() < 1e-9);

    flow::FlowConfig short_cfg;
    short_cfg.t_end = 0.02;
    auto flat = flow::run_torus_flow(flat_torus(32, 32, 2 * kPi, 2 * kPi), short_cfg);
    CHECK_THROWS_AS(corollary_check(flat, bundle, ladder, opts), NotApplicable);
}
