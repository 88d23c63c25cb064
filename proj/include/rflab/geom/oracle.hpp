#pragma once

// Generic finite-difference curvature oracle: Christoffels from centered
// differences of the metric components, Riemann from the coordinate formula,
// Ricci by contraction. Slow, desk-scale only (dimension capped at 4); used
// to validate the closed-form reductions in curvature.hpp.

#include <functional>
#include <span>
#include <vector>

namespace rflab::geom {

inline constexpr int kOracleMaxDim = 4;

// Fills g (row-major dim x dim) with the metric components at x.
using MetricFn = std::function<void(std::span<const double> x, std::span<double> g)>;

struct OraclePoint {
    int dim = 0;
    std::vector<double> metric;  // g_{ij} at the point, row-major
    std::vector<double> ricci;   // R_{ij}, row-major
    std::vector<double> riemann; // R_{ijkl} all-lower, row-major i,j,k,l
    double scalar = 0;
    double riem_frobenius = 0;    // sqrt(R_{ijkl} R^{ijkl})
    double max_abs_sectional = 0; // over coordinate planes

    double g(int i, int j) const { return metric[i * dim + j]; }
    double ric(int i, int j) const { return ricci[i * dim + j]; }
    double riem(int i, int j, int k, int l) const {
        return riemann[((i * dim + j) * dim + k) * dim + l];
    }
    // Sectional curvature of the coordinate plane (e_i, e_j); sign pinned so
    // the unit round sphere gives +1.
    double sectional(int i, int j) const {
        const double denom = g(i, i) * g(j, j) - g(i, j) * g(i, j);
        return riem(i, j, i, j) / denom;
    }
};

// Throws std::invalid_argument if dim > 4 or the metric is not positive
// definite at any stencil node.
OraclePoint generic_curvature_oracle(const MetricFn& metric, int dim,
                                     std::span<const double> point, double h);

} // namespace rflab::geom
