#pragma once

// Exact shrinking-cylinder reference states. Two coefficient variants are
// exposed: Derived uses the first-principles slope for the unit round fiber,
//   psi(t)^2 = psi0^2 - 2(n-2) t,
// Paper uses the 2(n-1)(T - t) coefficient as printed,
//   psi(t)^2 = psi0^2 - 2(n-1) t.
// The discrepancy is a normalization of the fiber metric; the Derived variant
// is the one reproduced by step_warped_flow.

#include "rflab/geom/metrics.hpp"

namespace rflab::flow {

enum class SolitonVariant { Derived, Paper };

double cylinder_vanishing_time(int n, double psi0, SolitonVariant v = SolitonVariant::Derived);

// Throws std::domain_error at or past the vanishing time.
geom::WarpedMetric cylinder_soliton(int n, double psi0, double t,
                                    SolitonVariant v = SolitonVariant::Derived, int nx = 256,
                                    double period = 6.283185307179586476925287);

} // namespace rflab::flow
