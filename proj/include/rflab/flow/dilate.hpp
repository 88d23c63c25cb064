#pragma once

// Parabolic dilation of a computed trace: g_j(t) = lambda g(t_j + t/lambda).
// Metric components are scaled, the time axis is remapped, and every
// diagnostic row is recomputed from the scaled snapshots.

#include "rflab/flow/trace.hpp"

namespace rflab::flow {

// Throws WindowExceeded when t_j is outside the sampled window (the exception
// carries the achievable window); t_j must match a sampled time to 1e-9.
FlowTrace dilate(const FlowTrace& trace, const DilationSpec& spec);

} // namespace rflab::flow
