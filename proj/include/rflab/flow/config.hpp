#pragma once

#include <string>
#include <vector>

namespace rflab::flow {

struct FlowConfig {
    double dt_init = 1e-3;
    double cfl_safety = 0.45;  // in (0, 1]
    double t_end = 1.0;
    int snapshot_stride = 100; // steps between stored snapshots
    // psi floor triggering SingularityImminent; <= 0 means the default
    // 1e-3 * (initial min psi).
    double singularity_floor = -1.0;

    bool valid() const {
        return dt_init > 0 && t_end > 0 && cfl_safety > 0 && cfl_safety <= 1 &&
               snapshot_stride > 0;
    }
};

enum class Family { Torus, Warped };
enum class TerminationCause { ReachedTEnd, SingularityImminent };

inline std::string to_string(TerminationCause c) {
    return c == TerminationCause::ReachedTEnd ? "reached_t_end" : "singularity_imminent";
}

// Diagnostics table, one row per sampled time; columns documented in the
// trace CSV header.
struct DiagTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int col(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }
    std::vector<double> series(const std::string& name) const {
        const int c = col(name);
        std::vector<double> out;
        if (c < 0) return out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
};

} // namespace rflab::flow
