#pragma once

// Discrete exterior calculus on the torus grid: collocated components,
// centered first differences, codifferentials defined as exact discrete
// adjoints in the metric inner products. Consequences used throughout:
//   d1(d0 F) = 0 exactly, <d0 F, phi>_1 = <F, delta1 phi>_0 exactly,
//   and on the flat torus hodge_laplacian acts componentwise as the
//   (negative-spectrum) wide-stencil Laplacian.

#include "rflab/geom/curvature.hpp"
#include "rflab/hodge/oneform.hpp"

namespace rflab::hodge {

class DecOperators {
public:
    explicit DecOperators(ConformalTorusMetric m);

    const ConformalTorusMetric& metric() const { return m_; }

    OneForm d0(const Field2& f) const;       // gradient
    Field2 d1(const OneForm& phi) const;     // curl (coefficient of dx ^ dy)
    Field2 codifferential(const OneForm&) const;   // delta on 1-forms
    OneForm codifferential2(const Field2&) const;  // delta on 2-forms
    OneForm hodge_laplacian(const OneForm&) const; // -(d0 delta1 + delta2 d1)
    Field2 scalar_laplacian(const Field2&) const;  // -delta1 d0 (0-forms)

    // Independent implementation path via covariant derivatives with the
    // conformal Christoffels; used by the Weitzenboeck check only.
    OneForm rough_laplacian(const OneForm&) const;

    // Weighted inner products (used by adjointness tests).
    double ip0(const Field2& a, const Field2& b) const;
    double ip1(const OneForm& a, const OneForm& b) const;
    double ip2(const Field2& a, const Field2& b) const;

    // Raw RK4 stability bound for the 1-form heat flow (no safety factor).
    double heat_dt_bound() const;

private:
    ConformalTorusMetric m_;
    Field2 w_;  // e^{-2u}
    Field2 ux_, uy_; // centered derivatives of u (rough Laplacian path)
};

// One RK4 step of d phi/dt = hodge_laplacian(phi) with the metric held fixed.
// Throws StepRejected if dt exceeds the stability bound.
OneForm step_form_heat(const OneForm& phi, const ConformalTorusMetric& m, double dt);

} // namespace rflab::hodge
