#pragma once

// Artifact serialization. A trace directory holds trace.json (config, grid,
// termination, full snapshots) and trace.csv (diagnostics, one row per
// sampled time, the column order of the json "diag_columns" field). Doubles
// round-trip exactly: json uses shortest-round-trip formatting, csv uses
// %.17g.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rflab/flow/trace.hpp"
#include "rflab/hodge/comass.hpp"
#include "rflab/monitor/checks.hpp"

namespace rflab::io {

nlohmann::json trace_to_json(const flow::FlowTrace& tr);
flow::FlowTrace trace_from_json(const nlohmann::json& j);

void save_trace(const flow::FlowTrace& tr, const std::filesystem::path& dir,
                const nlohmann::json& scenario = {});
flow::FlowTrace load_trace(const std::filesystem::path& dir,
                           nlohmann::json* scenario_out = nullptr);

void write_csv(const std::filesystem::path& file, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::filesystem::path& file);

nlohmann::json report_to_json(const monitor::MonotoneReport& r);
nlohmann::json suite_to_json(const monitor::MonitorSuite& s);

void write_comass_log(const std::filesystem::path& file,
                      const std::vector<hodge::ComassLogRow>& log);

void write_text(const std::filesystem::path& file, const std::string& text);

} // namespace rflab::io
