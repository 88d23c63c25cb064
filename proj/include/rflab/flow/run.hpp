#pragma once

// Flow drivers: adaptive explicit stepping under the CFL bounds, snapshots at
// a fixed step stride, graceful termination at t_end or on SingularityImminent
// (warped family, psi under the configured floor). Deterministic: identical
// config and initial data give bit-identical traces on one platform.
//
// When an initial 1-form is supplied the run co-evolves, on the same time
// grid and RK4 substages,
//   d phi/dt = hodge_laplacian(phi)      (class representative)
//   d F/dt   = scalar_laplacian(F) - codifferential(phi_0)
// so that phi(t) = phi_0 + dF(t) holds to roundoff by construction.

#include "rflab/flow/trace.hpp"

namespace rflab::flow {

FlowTrace run_torus_flow(const geom::ConformalTorusMetric& m0, const FlowConfig& cfg);
FlowTrace run_torus_flow(const geom::ConformalTorusMetric& m0, const hodge::OneForm& phi0,
                         const FlowConfig& cfg);
FlowTrace run_warped_flow(const geom::WarpedMetric& m0, const FlowConfig& cfg);
FlowTrace run_warped_flow(const geom::WarpedMetric& m0, const std::vector<double>& a0,
                          const FlowConfig& cfg);

// Effective psi floor for a run (cfg value, or the default 1e-3 * initial min).
double effective_floor(const FlowConfig& cfg, const geom::WarpedMetric& m0);

// Diagnostics row for one snapshot (also used when recomputing after dilation).
std::vector<double> torus_diag_row(const TorusSnapshot& s, bool has_form);
std::vector<double> warped_diag_row(const WarpedSnapshot& s, bool has_form);
std::vector<std::string> torus_diag_columns(bool has_form);
std::vector<std::string> warped_diag_columns(bool has_form);

} // namespace rflab::flow
