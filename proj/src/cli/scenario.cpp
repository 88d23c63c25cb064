#include "rflab/cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "rflab/errors.hpp"
#include "rflab/flow/checks.hpp"
#include "rflab/flow/dilate.hpp"
#include "rflab/flow/run.hpp"
#include "rflab/hodge/potential.hpp"
#include "rflab/io/serialize.hpp"
#include "rflab/loops/shorten.hpp"

namespace rflab::cli {

using nlohmann::json;

namespace {

constexpr double kTau = 6.283185307179586476925287;

void require(bool ok, const std::string& where, const std::string& what) {
    if (!ok) throw ConfigError("config error at " + where + ": " + what);
}

double num(const json& j, const std::string& ptr, std::optional<double> fallback = {}) {
    const json::json_pointer p(ptr);
    if (!j.contains(p)) {
        if (fallback) return *fallback;
        throw ConfigError("config error at " + ptr + ": missing required number");
    }
    require(j.at(p).is_number(), ptr, "expected a number");
    return j.at(p).get<double>();
}

int integer(const json& j, const std::string& ptr, std::optional<int> fallback = {}) {
    const json::json_pointer p(ptr);
    if (!j.contains(p)) {
        if (fallback) return *fallback;
        throw ConfigError("config error at " + ptr + ": missing required integer");
    }
    require(j.at(p).is_number_integer(), ptr, "expected an integer");
    return j.at(p).get<int>();
}

std::string text(const json& j, const std::string& ptr, std::optional<std::string> fb = {}) {
    const json::json_pointer p(ptr);
    if (!j.contains(p)) {
        if (fb) return *fb;
        throw ConfigError("config error at " + ptr + ": missing required string");
    }
    require(j.at(p).is_string(), ptr, "expected a string");
    return j.at(p).get<std::string>();
}

// deterministic low-frequency field, the same recipe for every platform
geom::Field2 random_fourier_field(const geom::PeriodicGrid2& g, double amp, std::uint64_t seed,
                                  int kmax) {
    std::mt19937_64 eng(seed);
    auto sym = [&] { return 2.0 * (eng() >> 11) * 0x1.0p-53 - 1.0; };
    geom::Field2 f(g);
    for (int kx = 0; kx <= kmax; ++kx)
        for (int ky = -kmax; ky <= kmax; ++ky) {
            if (kx == 0 && ky <= 0) continue;
            const double a = sym(), b = sym();
            const double decay = 1.0 / (1.0 + kx * kx + ky * ky);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double ph = kTau * (kx * static_cast<double>(i) / g.nx +
                                              ky * static_cast<double>(j) / g.ny);
                    f.raw(i, j) += amp * decay * (a * std::cos(ph) + b * std::sin(ph));
                }
        }
    return f;
}

struct BuiltScenario {
    flow::Family family;
    geom::ConformalTorusMetric torus;
    geom::WarpedMetric warped;
    hodge::OneForm form_torus;
    std::vector<double> form_warped;
    bool has_form = false;
};

BuiltScenario build_initial(const Scenario& sc) {
    const json& c = sc.config;
    BuiltScenario b;
    const std::string family = text(c, "/family");
    require(family == "torus" || family == "warped", "/family", "must be 'torus' or 'warped'");
    const std::string kind = text(c, "/initial/kind");
    if (family == "torus") {
        b.family = flow::Family::Torus;
        const int nx = integer(c, "/grid/nx"), ny = integer(c, "/grid/ny");
        const double lx = num(c, "/grid/lx", kTau), ly = num(c, "/grid/ly", kTau);
        require(nx >= 8 && ny >= 8, "/grid", "nx, ny must be >= 8");
        b.torus = geom::flat_torus(nx, ny, lx, ly);
        if (kind == "flat") {
        } else if (kind == "sine_bump") {
            const double amp = num(c, "/initial/amp");
            const int kx = integer(c, "/initial/kx", 1), ky = integer(c, "/initial/ky", 1);
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    b.torus.u.raw(i, j) = amp * std::sin(kTau * kx * i / double(nx)) *
                                          std::cos(kTau * ky * j / double(ny));
        } else if (kind == "random_fourier") {
            require(c.contains(json::json_pointer("/seed")), "/seed",
                    "mandatory for randomized fields");
            b.torus.u = random_fourier_field(b.torus.grid(), num(c, "/initial/amp"),
                                             integer(c, "/seed"),
                                             integer(c, "/initial/kmax", 3));
        } else {
            require(false, "/initial/kind", "unknown torus generator '" + kind + "'");
        }
        if (c.contains(json::json_pointer("/form_initial"))) {
            b.has_form = true;
            b.form_torus = hodge::OneForm(b.torus.grid());
            const std::string fk = text(c, "/form_initial/kind");
            if (fk == "constant") {
                const double p = num(c, "/form_initial/p", 1.0);
                const double q = num(c, "/form_initial/q", 0.0);
                for (double& x : b.form_torus.p.v) x = p;
                for (double& x : b.form_torus.q.v) x = q;
            } else if (fk == "one_plus_sine") {
                const double base = num(c, "/form_initial/base", 1.0);
                const double amp = num(c, "/form_initial/amp", 0.3);
                for (int j = 0; j < ny; ++j)
                    for (int i = 0; i < nx; ++i)
                        b.form_torus.p.raw(i, j) = base + amp * std::sin(kTau * i / double(nx));
            } else {
                require(false, "/form_initial/kind", "unknown form generator '" + fk + "'");
            }
        }
    } else {
        b.family = flow::Family::Warped;
        b.warped.n = integer(c, "/grid/n", 3);
        b.warped.nx = integer(c, "/grid/nx");
        b.warped.period = num(c, "/grid/period", kTau);
        require(b.warped.n >= 3, "/grid/n", "ambient dimension must be >= 3");
        require(b.warped.nx >= 8, "/grid/nx", "must be >= 8");
        b.warped.phi.assign(b.warped.nx, 1.0);
        b.warped.psi.assign(b.warped.nx, 1.0);
        if (kind == "cylinder") {
            const double psi0 = num(c, "/initial/psi0", 1.0);
            b.warped.psi.assign(b.warped.nx, psi0);
        } else if (kind == "neck") {
            const double psi0 = num(c, "/initial/psi0", 1.0);
            const double amp = num(c, "/initial/amp");
            const int mode = integer(c, "/initial/mode", 1);
            require(amp < psi0, "/initial/amp", "amp must stay below psi0");
            for (int i = 0; i < b.warped.nx; ++i)
                b.warped.psi[i] = psi0 - amp * std::cos(kTau * mode * i / double(b.warped.nx));
        } else {
            require(false, "/initial/kind", "unknown warped generator '" + kind + "'");
        }
        if (c.contains(json::json_pointer("/form_initial"))) {
            b.has_form = true;
            const std::string fk = text(c, "/form_initial/kind");
            if (fk == "constant") {
                b.form_warped.assign(b.warped.nx, num(c, "/form_initial/a", 1.0));
            } else if (fk == "one_plus_sine") {
                const double base = num(c, "/form_initial/base", 1.0);
                const double amp = num(c, "/form_initial/amp", 0.3);
                b.form_warped.resize(b.warped.nx);
                for (int i = 0; i < b.warped.nx; ++i)
                    b.form_warped[i] = base + amp * std::sin(kTau * i / double(b.warped.nx));
            } else {
                require(false, "/form_initial/kind", "unknown form generator '" + fk + "'");
            }
        }
    }
    return b;
}

flow::FlowConfig flow_config(const Scenario& sc) {
    const json& c = sc.config;
    flow::FlowConfig f;
    f.dt_init = num(c, "/flow/dt_init", f.dt_init);
    f.cfl_safety = num(c, "/flow/cfl_safety", f.cfl_safety);
    f.t_end = num(c, "/flow/t_end", f.t_end);
    f.snapshot_stride = integer(c, "/flow/snapshot_stride", f.snapshot_stride);
    f.singularity_floor = num(c, "/flow/singularity_floor", f.singularity_floor);
    require(f.valid(), "/flow", "invalid flow configuration");
    return f;
}

monitor::MonitorOptions monitor_options(const Scenario& sc) {
    const json& c = sc.config;
    monitor::MonitorOptions m;
    m.supnorm_rate = num(c, "/monitor/supnorm_rate", m.supnorm_rate);
    m.comass_slack = num(c, "/monitor/comass_slack", m.comass_slack);
    m.theorem_slack = num(c, "/monitor/theorem_slack", m.theorem_slack);
    m.decay_rate = num(c, "/monitor/decay_rate", m.decay_rate);
    m.m_slack = num(c, "/monitor/m_slack", m.m_slack);
    m.period_rate = num(c, "/monitor/period_rate", m.period_rate);
    m.duality_tol = num(c, "/monitor/duality_tol", m.duality_tol);
    m.ladder_scaling_tol = num(c, "/monitor/ladder_scaling_tol", m.ladder_scaling_tol);
    m.loop_stride = integer(c, "/monitor/loop_stride", 0);
    m.comass_stride = integer(c, "/monitor/comass_stride", 0);
    m.stable_k_max = integer(c, "/monitor/stable_k_max", 4);
    m.loop.multistart = integer(c, "/monitor/loop_multistart", 4);
    if (sc.config.contains(json::json_pointer("/seed")))
        m.loop.seed = integer(sc.config, "/seed");
    return m;
}

loops::WindingClass alpha_class(const Scenario& sc) {
    const json& c = sc.config;
    const json::json_pointer p("/classes/alpha");
    require(c.contains(p) && c.at(p).is_array() && c.at(p).size() == 2, "/classes/alpha",
            "expected [p, q]");
    return {c.at(p)[0].get<int>(), c.at(p)[1].get<int>()};
}

std::array<double, 2> phi_periods(const Scenario& sc) {
    const json& c = sc.config;
    const json::json_pointer p("/classes/phi_periods");
    require(c.contains(p) && c.at(p).is_array() && c.at(p).size() == 2, "/classes/phi_periods",
            "expected [P1, P2]");
    return {c.at(p)[0].get<double>(), c.at(p)[1].get<double>()};
}

} // namespace

Scenario parse_scenario(const json& raw) {
    Scenario sc;
    sc.config = raw;
    sc.name = raw.contains("name") ? raw["name"].get<std::string>() : "scenario";
    // validate eagerly so config errors surface before any computation
    (void)build_initial(sc);
    (void)flow_config(sc);
    (void)monitor_options(sc);
    (void)alpha_class(sc);
    (void)phi_periods(sc);
    return sc;
}

Scenario load_scenario_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    json raw;
    try {
        raw = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + file.string() + ": " + e.what());
    }
    return parse_scenario(raw);
}

std::vector<std::string> preset_names() {
    return {"flat-torus", "bumpy-torus", "cylinder-soliton", "neckpinch-n3", "dilation-ladder"};
}

json preset_config(const std::string& name) {
    const double tau = kTau;
    if (name == "flat-torus") {
        return json{{"name", "flat-torus"},
                    {"family", "torus"},
                    {"seed", 1},
                    {"grid", {{"nx", 128}, {"ny", 128}, {"lx", tau}, {"ly", tau}}},
                    {"initial", {{"kind", "flat"}}},
                    {"form_initial", {{"kind", "constant"}, {"p", 1.0}, {"q", 0.0}}},
                    {"flow", {{"dt_init", 1e-3}, {"t_end", 1.0}, {"snapshot_stride", 150}}},
                    {"classes", {{"alpha", {1, 0}}, {"phi_periods", {tau, 0.0}}}},
                    {"monitor", {{"loop_multistart", 3}}}};
    }
    if (name == "bumpy-torus") {
        return json{{"name", "bumpy-torus"},
                    {"family", "torus"},
                    {"seed", 7},
                    {"grid", {{"nx", 128}, {"ny", 128}, {"lx", tau}, {"ly", tau}}},
                    {"initial", {{"kind", "sine_bump"}, {"amp", 0.3}, {"kx", 1}, {"ky", 1}}},
                    {"form_initial", {{"kind", "one_plus_sine"}, {"base", 1.0}, {"amp", 0.3}}},
                    {"flow", {{"dt_init", 1e-3}, {"t_end", 1.0}, {"snapshot_stride", 150}}},
                    {"classes", {{"alpha", {1, 0}}, {"phi_periods", {tau, 0.0}}}},
                    {"monitor", {{"loop_multistart", 4}}}};
    }
    if (name == "cylinder-soliton") {
        return json{{"name", "cylinder-soliton"},
                    {"family", "warped"},
                    {"seed", 11},
                    {"grid", {{"n", 3}, {"nx", 256}, {"period", tau}}},
                    {"initial", {{"kind", "cylinder"}, {"psi0", 1.0}}},
                    {"form_initial", {{"kind", "constant"}, {"a", 1.0}}},
                    {"flow", {{"dt_init", 1e-4}, {"t_end", 1.0}, {"snapshot_stride", 300}}},
                    {"classes", {{"alpha", {1, 0}}, {"phi_periods", {tau, 0.0}}}},
                    {"monitor", {{"loop_multistart", 2}, {"run_ladder", true}}}};
    }
    if (name == "neckpinch-n3") {
        return json{{"name", "neckpinch-n3"},
                    {"family", "warped"},
                    {"seed", 13},
                    {"grid", {{"n", 3}, {"nx", 256}, {"period", tau}}},
                    {"initial", {{"kind", "neck"}, {"psi0", 1.0}, {"amp", 0.5}, {"mode", 1}}},
                    {"form_initial", {{"kind", "constant"}, {"a", 1.0}}},
                    {"flow", {{"dt_init", 2e-4}, {"t_end", 2.0}, {"snapshot_stride", 60}}},
                    {"classes", {{"alpha", {1, 0}}, {"phi_periods", {tau, 0.0}}}},
                    {"monitor", {{"loop_multistart", 3}, {"run_ladder", true}}}};
    }
    if (name == "dilation-ladder") {
        json j = preset_config("cylinder-soliton");
        j["name"] = "dilation-ladder";
        j["monitor"]["run_ladder"] = true;
        j["monitor"]["ladder_size"] = 5;
        return j;
    }
    // nearest match by shared-prefix length
    std::string best;
    std::size_t best_len = 0;
    for (const auto& p : preset_names()) {
        std::size_t k = 0;
        while (k < p.size() && k < name.size() && p[k] == name[k]) ++k;
        if (k > best_len) {
            best_len = k;
            best = p;
        }
    }
    throw ConfigError("unknown preset '" + name + "'" +
                      (best.empty() ? "" : "; nearest match: " + best));
}

flow::FlowTrace run_configured_flow(const Scenario& sc) {
    const auto built = build_initial(sc);
    const auto fcfg = flow_config(sc);
    if (built.family == flow::Family::Torus) {
        return built.has_form ? flow::run_torus_flow(built.torus, built.form_torus, fcfg)
                              : flow::run_torus_flow(built.torus, fcfg);
    }
    return built.has_form ? flow::run_warped_flow(built.warped, built.form_warped, fcfg)
                          : flow::run_warped_flow(built.warped, fcfg);
}

json evaluate_monitors(const flow::FlowTrace& trace, const Scenario& sc, bool* all_pass) {
    const auto mopts = monitor_options(sc);
    const auto alpha = alpha_class(sc);
    const auto periods = phi_periods(sc);

    const auto bundle = monitor::make_bundle(trace, alpha, periods, mopts.comass);
    auto suite = monitor::track_monotones(trace, bundle, mopts);

    json verdict = io::suite_to_json(suite);
    verdict["schema"] = "rflab-verdict-1";
    verdict["scenario"] = sc.name;
    verdict["bundle"] = {{"pairing", bundle.pairing},
                         {"n0", bundle.n0},
                         {"n0_gap", bundle.n0_gap},
                         {"c", bundle.c}};

    bool pass = suite.all_pass();

    // scalar-curvature comparison applies to every trace
    const auto rmin = flow::rmin_comparison_check(trace);
    verdict["rmin_comparison"] = {{"r0", rmin.r0},
                                  {"strict", rmin.strict},
                                  {"worst_violation", rmin.worst_violation},
                                  {"slack", rmin.slack},
                                  {"t_bound", rmin.t_bound},
                                  {"t_bound_ok", rmin.t_bound_ok},
                                  {"pass", rmin.pass}};
    pass = pass && rmin.pass;

    if (trace.cause == flow::TerminationCause::SingularityImminent) {
        const auto blow = flow::blowup_rate_check(trace);
        verdict["blowup_rate"] = {{"constant", blow.constant}, {"pass", blow.pass}};
        pass = pass && blow.pass;

        const json::json_pointer ladder_flag("/monitor/run_ladder");
        if (sc.config.contains(ladder_flag) && sc.config.at(ladder_flag).get<bool>()) {
            const int ladder_size = integer(sc.config, "/monitor/ladder_size", 5);
            std::vector<flow::DilationSpec> ladder;
            const std::size_t n = trace.size();
            for (int j = 0; j < ladder_size && j + 2 < static_cast<int>(n); ++j) {
                const std::size_t idx = n - 2 - j;
                const double tj = trace.time(idx);
                if (trace.t_num <= tj) continue;
                ladder.push_back({1.0 / (trace.t_num - tj), tj, 0});
            }
            std::reverse(ladder.begin(), ladder.end());
            if (!ladder.empty()) {
                const auto cor = monitor::corollary_check(trace, bundle, ladder, mopts);
                verdict["corollary_ladder"] = {
                    {"lambdas", cor.lambdas},
                    {"l_alpha_dilated", cor.l_alpha_dilated},
                    {"sqrt_scaling_error", cor.sqrt_scaling_error},
                    {"blowup_products", cor.blowup_products},
                    {"worst_scaling_error", cor.worst_scaling_error},
                    {"growth_monotone", cor.growth_monotone},
                    {"pass", cor.pass}};
                pass = pass && cor.pass;
            }
        }
    }
    verdict["overall_pass"] = pass;
    if (all_pass) *all_pass = pass;
    return verdict;
}

int run_scenario(const Scenario& sc, const std::filesystem::path& out) {
    std::filesystem::create_directories(out);
    flow::FlowTrace trace;
    try {
        trace = run_configured_flow(sc);
    } catch (const StepRejected& e) {
        io::write_text(out / "event.log", std::string("numerical event: ") + e.what());
        return kExitNumerical;
    } catch (const std::runtime_error& e) {
        io::write_text(out / "event.log", std::string("numerical event: ") + e.what());
        return kExitNumerical;
    }
    io::save_trace(trace, out, sc.config);

    // convergence log of the initial comass solve
    const auto mopts = monitor_options(sc);
    if (trace.family == flow::Family::Torus) {
        const auto periods = phi_periods(sc);
        const auto cls = hodge::make_class(trace.torus.front().metric.grid(), periods[0],
                                           periods[1]);
        const auto res = hodge::comass_norm(cls, trace.torus.front().metric, mopts.comass);
        io::write_comass_log(out / "comass_log.csv", res.log);
    }

    // geodesic dumps per sampled snapshot
    {
        const auto alpha = alpha_class(sc);
        const auto series = monitor::l_alpha_series(trace, alpha, mopts);
        std::vector<std::vector<double>> rows;
        loops::MinLengthOptions lo = mopts.loop;
        for (std::size_t s = 0; s < series.snapshot_index.size(); ++s) {
            const auto idx = series.snapshot_index[s];
            const auto sm = loops::snapshot_surface(trace, idx);
            const auto r = loops::min_length(alpha, sm, lo);
            for (std::size_t k = 0; k < r.minimizer.v.size(); ++k)
                rows.push_back({static_cast<double>(idx), trace.time(idx),
                                static_cast<double>(k), r.minimizer.v[k][0],
                                r.minimizer.v[k][1], r.value, r.residual});
        }
        io::write_csv(out / "geodesics.csv",
                      {"snapshot", "time", "vertex", "x", "y", "length", "residual"}, rows);
    }

    bool pass = false;
    json verdict;
    try {
        verdict = evaluate_monitors(trace, sc, &pass);
    } catch (const NotApplicable& e) {
        io::write_text(out / "event.log", std::string("monitor: ") + e.what());
        return kExitNumerical;
    }
    io::write_text(out / "verdict.json", verdict.dump(1));
    return pass ? kExitPass : kExitVerdict;
}

int verify_trace(const std::filesystem::path& trace_dir, const std::filesystem::path& out_dir) {
    json scenario_json;
    const auto trace = io::load_trace(trace_dir, &scenario_json);
    if (scenario_json.is_null() || scenario_json.empty())
        throw ConfigError("verify: trace.json carries no scenario config");
    Scenario sc = parse_scenario(scenario_json);
    bool pass = false;
    const json verdict = evaluate_monitors(trace, sc, &pass);
    std::filesystem::create_directories(out_dir);
    io::write_text(out_dir / "verdict.json", verdict.dump(1));

    // compare against the stored verdict when present
    const auto stored_path = trace_dir / "verdict.json";
    if (std::filesystem::exists(stored_path)) {
        std::ifstream in(stored_path);
        const json stored = json::parse(in);
        if (stored != verdict) {
            io::write_text(out_dir / "verify_mismatch.log",
                           "recomputed verdict differs from stored verdict");
            return kExitVerdict;
        }
    }
    return pass ? kExitPass : kExitVerdict;
}

} // namespace rflab::cli
