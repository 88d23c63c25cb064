#include "rflab/hodge/checks.hpp"

#include <cmath>

#include "rflab/geom/curvature.hpp"

namespace rflab::hodge {

WeitzenbockReport weitzenbock_check(const ConformalTorusMetric& m, const OneForm& phi) {
    DecOperators dec(m);
    const auto curv = geom::torus_curvature(m);
    const OneForm hl = dec.hodge_laplacian(phi);
    const OneForm rl = dec.rough_laplacian(phi);
    WeitzenbockReport rep;
    for (std::size_t i = 0; i < hl.p.v.size(); ++i) {
        const double k = curv.k.v[i];
        const double rp = hl.p.v[i] - (rl.p.v[i] - k * phi.p.v[i]);
        const double rq = hl.q.v[i] - (rl.q.v[i] - k * phi.q.v[i]);
        const double norm = std::exp(-m.u.v[i]) * std::sqrt(rp * rp + rq * rq);
        rep.sup_residual = std::max(rep.sup_residual, norm);
    }
    return rep;
}

NormAxiomReport norm_axiom_check(const ConformalTorusMetric& m,
                                 std::span<const CohomologyClass> classes, double tol,
                                 const ComassOptions& opts) {
    NormAxiomReport rep;
    std::vector<ComassResult> base;
    base.reserve(classes.size());
    for (const auto& c : classes) base.push_back(comass_norm(c, m, opts));

    auto add = [&](const std::string& name, double violation) {
        rep.rows.push_back({name, violation});
        rep.worst_violation = std::max(rep.worst_violation, violation);
    };

    for (std::size_t i = 0; i < classes.size(); ++i) {
        for (double c : {-2.0, 0.5}) {
            const auto scaled = comass_norm(scale_class(classes[i], c), m, opts);
            const double expect = std::fabs(c) * base[i].value;
            add("homogeneity c=" + std::to_string(c) + " class " + std::to_string(i),
                std::fabs(scaled.value - expect) - (scaled.gap + std::fabs(c) * base[i].gap));
        }
    }
    for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = i + 1; j < classes.size(); ++j) {
            const auto sum = comass_norm(add_classes(classes[i], classes[j]), m, opts);
            // upper bound of the sum can only exceed the true N by its gap
            add("triangle " + std::to_string(i) + "+" + std::to_string(j),
                sum.value - base[i].value - base[j].value - sum.gap);
        }

    rep.positivity_margin = 0;
    bool first = true;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i].periods[0] == 0 && classes[i].periods[1] == 0) continue;
        if (first) {
            rep.positivity_margin = base[i].lower_bound;
            first = false;
        } else {
            rep.positivity_margin = std::min(rep.positivity_margin, base[i].lower_bound);
        }
    }
    rep.pass = rep.worst_violation <= tol && (first || rep.positivity_margin > 0);
    return rep;
}

} // namespace rflab::hodge
