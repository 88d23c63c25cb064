#pragma once

// Closed-form curvature of the two model families.
//
// Conventions, used everywhere downstream:
//  - torus:  K = -e^{-2u}(u_xx + u_yy), R = 2K.
//  - warped: arclength derivatives d/ds = (1/phi) d/dx;
//            K_rad = -psi_ss / psi              (planes containing d/ds),
//            K_sph = (1 - psi_s^2) / psi^2      (planes tangent to the sphere),
//            rc_ss  = Rc(d/dx, d/dx)            = (n-1) phi^2 K_rad,
//            rc_sph = coefficient of Rc against g_can
//                                               = psi^2 (K_rad + (n-2) K_sph),
//            R = 2(n-1) K_rad + (n-1)(n-2) K_sph,
//            so that Ricci flow reads  d phi/dt = -rc_ss/phi  and
//            d psi/dt = -rc_sph/psi.
//  - sup_rm is the sup over nodes of the largest absolute sectional curvature
//    (torus: |K|; warped: max(|K_rad|, |K_sph|)).

#include <vector>

#include "rflab/geom/metrics.hpp"

namespace rflab::geom {

struct CurvatureFields {
    // torus family
    Field2 k; // Gauss curvature (empty for warped)

    // warped family (empty for torus)
    std::vector<double> rc_ss;  // coordinate Ricci component Rc(d/dx, d/dx)
    std::vector<double> rc_sph; // coefficient of Rc against g_can
    std::vector<double> k_rad;  // sectional curvature, radial planes
    std::vector<double> k_sph;  // sectional curvature, spherical planes

    std::vector<double> r; // scalar curvature samples (both families, flattened)
    double r_min = 0, r_max = 0;
    double sup_rm = 0;

    // torus only: discrete Gauss-Bonnet integral (exactly 0 up to roundoff
    // for the compact stencil; logged for the invariant check)
    double total_k_da = 0;
    double total_abs_k_da = 0;
};

CurvatureFields torus_curvature(const ConformalTorusMetric& m);
CurvatureFields warped_curvature(const WarpedMetric& m);

} // namespace rflab::geom
