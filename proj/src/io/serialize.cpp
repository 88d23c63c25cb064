#include "rflab/io/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rflab::io {

using nlohmann::json;

namespace {

json config_to_json(const flow::FlowConfig& c) {
    return json{{"dt_init", c.dt_init},
                {"cfl_safety", c.cfl_safety},
                {"t_end", c.t_end},
                {"snapshot_stride", c.snapshot_stride},
                {"singularity_floor", c.singularity_floor}};
}

flow::FlowConfig config_from_json(const json& j) {
    flow::FlowConfig c;
    c.dt_init = j.at("dt_init");
    c.cfl_safety = j.at("cfl_safety");
    c.t_end = j.at("t_end");
    c.snapshot_stride = j.at("snapshot_stride");
    c.singularity_floor = j.at("singularity_floor");
    return c;
}

} // namespace

json trace_to_json(const flow::FlowTrace& tr) {
    json j;
    j["schema"] = "rflab-trace-1";
    j["family"] = tr.family == flow::Family::Torus ? "torus" : "warped";
    j["config"] = config_to_json(tr.cfg);
    j["has_form"] = tr.has_form;
    j["termination"] = {{"cause", flow::to_string(tr.cause)}, {"t_num", tr.t_num}};
    j["diag_columns"] = tr.diag.columns;
    json snaps = json::array();
    if (tr.family == flow::Family::Torus) {
        const auto& g = tr.torus.front().metric.grid();
        j["grid"] = {{"nx", g.nx}, {"ny", g.ny}, {"lx", g.lx}, {"ly", g.ly}};
        for (const auto& s : tr.torus) {
            json e{{"t", s.t}, {"u", s.metric.u.v}};
            if (tr.has_form) {
                e["form_p"] = s.form.p.v;
                e["form_q"] = s.form.q.v;
                e["potential"] = s.potential.v;
            }
            snaps.push_back(std::move(e));
        }
    } else {
        const auto& m = tr.warped.front().metric;
        j["grid"] = {{"n", m.n}, {"nx", m.nx}, {"period", m.period}};
        for (const auto& s : tr.warped) {
            json e{{"t", s.t}, {"phi", s.metric.phi}, {"psi", s.metric.psi}};
            if (tr.has_form) {
                e["form"] = s.form;
                e["potential"] = s.potential;
            }
            snaps.push_back(std::move(e));
        }
    }
    j["snapshots"] = std::move(snaps);
    return j;
}

flow::FlowTrace trace_from_json(const json& j) {
    if (j.at("schema") != "rflab-trace-1")
        throw std::invalid_argument("trace: unknown schema");
    flow::FlowTrace tr;
    tr.family = j.at("family") == "torus" ? flow::Family::Torus : flow::Family::Warped;
    tr.cfg = config_from_json(j.at("config"));
    tr.has_form = j.at("has_form");
    tr.cause = j.at("termination").at("cause") == "reached_t_end"
                   ? flow::TerminationCause::ReachedTEnd
                   : flow::TerminationCause::SingularityImminent;
    tr.t_num = j.at("termination").at("t_num");
    tr.diag.columns = j.at("diag_columns").get<std::vector<std::string>>();
    if (tr.family == flow::Family::Torus) {
        geom::PeriodicGrid2 g{j.at("grid").at("nx"), j.at("grid").at("ny"), j.at("grid").at("lx"),
                              j.at("grid").at("ly")};
        for (const auto& e : j.at("snapshots")) {
            flow::TorusSnapshot s;
            s.t = e.at("t");
            s.metric.u = geom::Field2(g);
            s.metric.u.v = e.at("u").get<std::vector<double>>();
            if (tr.has_form) {
                s.form = hodge::OneForm(g);
                s.form.p.v = e.at("form_p").get<std::vector<double>>();
                s.form.q.v = e.at("form_q").get<std::vector<double>>();
                s.potential = geom::Field2(g);
                s.potential.v = e.at("potential").get<std::vector<double>>();
            }
            tr.diag.rows.push_back(flow::torus_diag_row(s, tr.has_form));
            tr.torus.push_back(std::move(s));
        }
    } else {
        const auto& gj = j.at("grid");
        for (const auto& e : j.at("snapshots")) {
            flow::WarpedSnapshot s;
            s.t = e.at("t");
            s.metric.n = gj.at("n");
            s.metric.nx = gj.at("nx");
            s.metric.period = gj.at("period");
            s.metric.phi = e.at("phi").get<std::vector<double>>();
            s.metric.psi = e.at("psi").get<std::vector<double>>();
            if (tr.has_form) {
                s.form = e.at("form").get<std::vector<double>>();
                s.potential = e.at("potential").get<std::vector<double>>();
            }
            tr.diag.rows.push_back(flow::warped_diag_row(s, tr.has_form));
            tr.warped.push_back(std::move(s));
        }
    }
    return tr;
}

void write_csv(const std::filesystem::path& file, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::FILE* f = std::fopen(file.string().c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + file.string());
    for (std::size_t i = 0; i < columns.size(); ++i)
        std::fprintf(f, "%s%s", columns[i].c_str(), i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            std::fprintf(f, "%.17g%s", row[i], i + 1 < row.size() ? "," : "\n");
    }
    std::fclose(f);
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string line;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (header) {
            columns = cells;
            header = false;
        } else {
            std::vector<double> row;
            row.reserve(cells.size());
            for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
            rows.push_back(std::move(row));
        }
    }
    return {columns, rows};
}

void save_trace(const flow::FlowTrace& tr, const std::filesystem::path& dir,
                const json& scenario) {
    std::filesystem::create_directories(dir);
    json j = trace_to_json(tr);
    if (!scenario.is_null() && !scenario.empty()) j["scenario"] = scenario;
    write_text(dir / "trace.json", j.dump(1));
    write_csv(dir / "trace.csv", tr.diag.columns, tr.diag.rows);
}

flow::FlowTrace load_trace(const std::filesystem::path& dir, json* scenario_out) {
    std::ifstream in(dir / "trace.json");
    if (!in) throw std::runtime_error("cannot open " + (dir / "trace.json").string());
    json j = json::parse(in);
    if (scenario_out && j.contains("scenario")) *scenario_out = j["scenario"];
    return trace_from_json(j);
}

json report_to_json(const monitor::MonotoneReport& r) {
    return json{{"quantity", r.quantity}, {"times", r.times},
                {"values", r.values},     {"worst_violation", r.worst_violation},
                {"slack", r.slack},       {"pass", r.pass},
                {"note", r.note}};
}

json suite_to_json(const monitor::MonitorSuite& s) {
    json reports = json::array();
    for (const auto& r : s.reports) reports.push_back(report_to_json(r));
    return json{{"reports", std::move(reports)}, {"overall_pass", s.all_pass()}};
}

void write_comass_log(const std::filesystem::path& file,
                      const std::vector<hodge::ComassLogRow>& log) {
    std::vector<std::vector<double>> rows;
    rows.reserve(log.size());
    for (const auto& r : log)
        rows.push_back({static_cast<double>(r.iter), static_cast<double>(r.k), r.surrogate,
                        r.sup, r.gap});
    write_csv(file, {"iteration", "k_level", "surrogate", "sup_value", "gap"}, rows);
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open " + file.string());
    out << text << "\n";
}

} // namespace rflab::io
