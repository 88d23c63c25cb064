#pragma once

// Scenario runner: binds a JSON config (documented in the README) to initial
// data, a flow run, the monitor battery, and the artifact directory.
// Exit-code contract: 0 pass / 2 config error / 3 numerical event /
// 4 verdict fail.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rflab/flow/trace.hpp"
#include "rflab/monitor/checks.hpp"

namespace rflab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitVerdict = 4;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Scenario {
    std::string name;
    nlohmann::json config; // validated effective config
};

// Throws ConfigError with a json-pointer-anchored message on violations.
Scenario parse_scenario(const nlohmann::json& raw);
Scenario load_scenario_file(const std::filesystem::path& file);

std::vector<std::string> preset_names();
nlohmann::json preset_config(const std::string& name); // throws ConfigError (names nearest match)

// Builds initial data, runs the (coupled) flow. Throws on numerical events.
flow::FlowTrace run_configured_flow(const Scenario& sc);

// Full pipeline; writes trace.json/csv, verdict.json, comass_log.csv,
// geodesics_*.csv into out. Returns the exit code.
int run_scenario(const Scenario& sc, const std::filesystem::path& out);

// Recompute monitors for a stored trace and compare against its verdict.
int verify_trace(const std::filesystem::path& trace_dir,
                 const std::filesystem::path& out_dir);

// Monitor battery shared by run and verify; appends corollary/rmin/blowup
// evidence where applicable.
nlohmann::json evaluate_monitors(const flow::FlowTrace& trace, const Scenario& sc,
                                 bool* all_pass);

} // namespace rflab::cli
