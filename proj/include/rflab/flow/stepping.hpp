#pragma once

// Explicit RK4 integrators for the two flow reductions:
//   torus:  du/dt = e^{-2u}(u_xx + u_yy)
//   warped: dphi/dt = (n-1) phi psi_ss / psi
//           dpsi/dt = psi_ss - (n-2)(1 - psi_s^2)/psi     (s = arclength)
// Steps reject dt above the raw stability bound; callers apply cfl_safety.

#include "rflab/geom/metrics.hpp"

namespace rflab::flow {

using geom::ConformalTorusMetric;
using geom::WarpedMetric;

// h^2 / (4 max e^{-2u}) with h = min(hx, hy).
double torus_dt_bound(const ConformalTorusMetric& m);

// min of the diffusion bound hx^2 min(phi)^2 / 2, the sphere reaction bound
// min(psi)^2 / (n-2), and the phi-equation reaction bound.
double warped_dt_bound(const WarpedMetric& m);

ConformalTorusMetric step_torus_flow(const ConformalTorusMetric& m, double dt);
WarpedMetric step_warped_flow(const WarpedMetric& m, double dt);

namespace detail {
geom::Field2 torus_rhs(const geom::Field2& u);
void warped_rhs(const WarpedMetric& m, std::vector<double>& dphi, std::vector<double>& dpsi);
} // namespace detail

} // namespace rflab::flow
