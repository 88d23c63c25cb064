#pragma once

// Shared helpers for the test suites: deterministic smooth random fields and
// common metric constructions.

#include <cmath>
#include <cstdint>
#include <random>

#include "rflab/geom/metrics.hpp"
#include "rflab/hodge/oneform.hpp"

namespace testsupport {

inline constexpr double kPi = 3.14159265358979323846;

// Platform-stable uniform in [-1, 1): raw engine output only.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double sym() { return 2.0 * (eng_() >> 11) * 0x1.0p-53 - 1.0; }

private:
    std::mt19937_64 eng_;
};

// Low-frequency Fourier field with amplitude amp, modes |k| <= kmax.
inline rflab::geom::Field2 random_smooth_field(const rflab::geom::PeriodicGrid2& g, double amp,
                                               std::uint64_t seed, int kmax = 3) {
    Rng rng(seed);
    rflab::geom::Field2 f(g);
    for (int kx = 0; kx <= kmax; ++kx)
        for (int ky = -kmax; ky <= kmax; ++ky) {
            if (kx == 0 && ky <= 0) continue;
            const double a = rng.sym(), b = rng.sym();
            const double decay = 1.0 / (1.0 + kx * kx + ky * ky);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double ph = 2 * kPi * (kx * static_cast<double>(i) / g.nx +
                                                 ky * static_cast<double>(j) / g.ny);
                    f.raw(i, j) += amp * decay * (a * std::cos(ph) + b * std::sin(ph));
                }
        }
    return f;
}

inline rflab::geom::ConformalTorusMetric random_torus(int n, double amp, std::uint64_t seed) {
    rflab::geom::ConformalTorusMetric m;
    m.u = random_smooth_field(rflab::geom::PeriodicGrid2{n, n, 2 * kPi, 2 * kPi}, amp, seed);
    return m;
}

inline rflab::hodge::OneForm random_form(const rflab::geom::PeriodicGrid2& g, double amp,
                                         std::uint64_t seed) {
    rflab::hodge::OneForm phi(g);
    phi.p = random_smooth_field(g, amp, seed);
    phi.q = random_smooth_field(g, amp, seed + 1);
    return phi;
}

} // namespace testsupport
