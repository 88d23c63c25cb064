#pragma once

// Reduced 1-D form calculus on the warped family: de Rham classes of
// S^1 x S^{n-1} are carried by x-proportional forms a(x) dx, with
// |a dx|_g = |a|/phi and volume weight phi psi^{n-1} per unit coordinate.
// The codifferential is the exact discrete adjoint, as on the torus, so the
// period Sum a h is conserved exactly by the heat flow (telescoping).

#include <vector>

#include "rflab/geom/metrics.hpp"

namespace rflab::hodge {

using geom::WarpedMetric;

class WarpedFormOps {
public:
    explicit WarpedFormOps(const WarpedMetric& m);

    std::vector<double> codifferential(const std::vector<double>& a) const;
    std::vector<double> laplacian(const std::vector<double>& a) const;       // on a dx
    std::vector<double> scalar_laplacian(const std::vector<double>& f) const; // on functions
    std::vector<double> d0(const std::vector<double>& f) const;

    double heat_dt_bound() const; // Gershgorin RK4 bound, no safety factor

private:
    int nx_;
    double hx_;
    std::vector<double> b_;    // psi^{n-1}/phi
    std::vector<double> winv_; // 1/(phi psi^{n-1})
};

double warped_sup_norm(const std::vector<double>& a, const WarpedMetric& m);
double warped_period(const std::vector<double>& a, const WarpedMetric& m);

struct WarpedComassResult {
    double value = 0;       // upper bound from the ladder iterate
    double lower_bound = 0; // |period| / S^1 arclength (the exact optimum)
    double gap = 0;
    std::vector<double> minimizer_f;
};

// Comass of the class with x-period `target_period` under the same L^{2k}
// ladder as the torus solver; the 1-D minimax has the closed-form optimum
// a = P phi / Int phi dx, so lower and upper should coincide to solver
// tolerance.
WarpedComassResult warped_comass(double target_period, const WarpedMetric& m);

} // namespace rflab::hodge
