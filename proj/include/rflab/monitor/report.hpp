#pragma once

#include <string>
#include <vector>

namespace rflab::monitor {

struct MonotoneReport {
    std::string quantity;
    std::vector<double> times;
    std::vector<double> values;
    double worst_violation = 0; // signed; pass iff <= slack
    double slack = 0;
    bool pass = false;
    std::string note;
};

enum class Direction { NonIncreasing, NonDecreasing, Constant };

// Worst violation of the requested monotonicity over all sampled pairs:
// the largest run-up (NonIncreasing), run-down (NonDecreasing), or absolute
// deviation from the first sample (Constant).
MonotoneReport check_monotone(std::string quantity, std::vector<double> times,
                              std::vector<double> values, Direction dir, double slack);

} // namespace rflab::monitor
