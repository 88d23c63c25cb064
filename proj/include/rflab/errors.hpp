#pragma once

#include <stdexcept>
#include <string>

namespace rflab {

// Invalid field data (non-finite or out-of-range values), with the offending node.
class InvalidField : public std::runtime_error {
public:
    InvalidField(const std::string& field, int i, int j, const std::string& what)
        : std::runtime_error("invalid field '" + field + "' at node (" + std::to_string(i) +
                             ", " + std::to_string(j) + "): " + what),
          field_name(field), node_i(i), node_j(j) {}
    std::string field_name;
    int node_i = 0;
    int node_j = 0;
};

// Explicit step exceeds the stability bound; carries the admissible dt.
class StepRejected : public std::runtime_error {
public:
    StepRejected(double requested, double admissible)
        : std::runtime_error("time step " + std::to_string(requested) +
                             " exceeds stability bound " + std::to_string(admissible)),
          requested_dt(requested), admissible_dt(admissible) {}
    double requested_dt;
    double admissible_dt;
};

// A check was asked of a trace it does not apply to (e.g. blowup rate on a non-singular run).
class NotApplicable : public std::runtime_error {
public:
    explicit NotApplicable(const std::string& what) : std::runtime_error(what) {}
};

// Requested rescaled window is outside the computed trace; carries the achievable window.
class WindowExceeded : public std::runtime_error {
public:
    WindowExceeded(double lo, double hi)
        : std::runtime_error("requested window outside trace; achievable [" +
                             std::to_string(lo) + ", " + std::to_string(hi) + "]"),
          achievable_lo(lo), achievable_hi(hi) {}
    double achievable_lo;
    double achievable_hi;
};

} // namespace rflab
