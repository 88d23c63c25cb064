#pragma once

// Smooth (C^1) point-evaluable 2-D periodic metric for the loop machinery,
// built from nodal fields by periodic Catmull-Rom interpolation. Both model
// families reduce to this surface:
//   torus:  (x, y) with g = diag(e^{2u}, e^{2u}); ambient n = 2.
//   warped: (x, theta) with g = diag(phi^2, psi^2) on S^1 x (great circle);
//           the reduction is totally geodesic and contains every minimizer,
//           and the n-2 sphere directions orthogonal to it are exactly
//           parallel along curves in the reduction. ambient n = metric n.
// Curvature fields ride along for the stability and Ricci integrals.

#include <array>
#include <vector>

#include "rflab/geom/curvature.hpp"
#include "rflab/geom/metrics.hpp"

namespace rflab::loops {

struct Mat2 {
    double a11 = 0, a12 = 0, a22 = 0;
    double det() const { return a11 * a22 - a12 * a12; }
};

// Periodic Catmull-Rom interpolant of a nodal field.
class CrInterp {
public:
    CrInterp() = default;
    CrInterp(int nx, int ny, double lx, double ly, std::vector<double> nodal);

    double eval(double x, double y) const;
    void jet(double x, double y, double& f, double& fx, double& fy) const;

private:
    int nx_ = 0, ny_ = 0;
    double hx_ = 0, hy_ = 0;
    std::vector<double> v_;
};

class SurfaceMetric {
public:
    double lx = 0, ly = 0;
    int nx = 0, ny = 0;
    int ambient_n = 2;
    bool warped_family = false;

    Mat2 metric(double x, double y) const;
    // metric value plus coordinate derivatives of each component
    void metric_jet(double x, double y, Mat2& g, Mat2& gx, Mat2& gy) const;

    // Christoffel symbols at a point: gamma[a][b][c] = Gamma^a_{bc}.
    void christoffel(double x, double y, double gamma[2][2][2]) const;

    // Sectional curvature of the surface tangent plane (K on the torus,
    // K_rad on the warped reduction).
    double k_surface(double x, double y) const;
    // Spherical sectional curvature K_sph (warped only; 0 on the torus).
    double k_sphere(double x, double y) const;

    // Rc(V, V) for a unit vector with orthonormal-frame components
    // (ca, cb) along the coordinate directions.
    double ricci_vv(double x, double y, double ca, double cb) const;

    static SurfaceMetric from_torus(const geom::ConformalTorusMetric& m);
    static SurfaceMetric from_warped(const geom::WarpedMetric& m, int ntheta = 64);

private:
    CrInterp g11_, g12_, g22_, krad_, ksph_;
    bool has_g12_ = false;
};

} // namespace rflab::loops
