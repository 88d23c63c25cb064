#include "rflab/flow/soliton.hpp"

#include <cmath>
#include <stdexcept>

namespace rflab::flow {

double cylinder_vanishing_time(int n, double psi0, SolitonVariant v) {
    const double slope = (v == SolitonVariant::Derived) ? 2.0 * (n - 2) : 2.0 * (n - 1);
    return psi0 * psi0 / slope;
}

geom::WarpedMetric cylinder_soliton(int n, double psi0, double t, SolitonVariant v, int nx,
                                    double period) {
    const double tv = cylinder_vanishing_time(n, psi0, v);
    if (t >= tv) throw std::domain_error("cylinder_soliton: t at or past the vanishing time");
    const double slope = (v == SolitonVariant::Derived) ? 2.0 * (n - 2) : 2.0 * (n - 1);
    geom::WarpedMetric m;
    m.n = n;
    m.nx = nx;
    m.period = period;
    m.phi.assign(nx, 1.0);
    m.psi.assign(nx, std::sqrt(psi0 * psi0 - slope * t));
    m.validate();
    return m;
}

} // namespace rflab::flow
