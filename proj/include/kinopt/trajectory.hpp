#pragma once

#include <cstdint>
#include <vector>

#include "kinopt/types.hpp"

namespace kinopt {

// Scalar time series recorded along a run, plus optional sparse full-state
// snapshots. times/losses/p_norms (and xi_norms when the optimizer carries
// xi) advance together every record stride; samples advance on their own
// stride. Row 0 is always the initial state and the last row is the final
// (or last finite) state.
struct Trajectory {
    std::vector<std::uint64_t> steps;
    std::vector<double> times;
    std::vector<double> losses;
    std::vector<double> p_norms;
    std::vector<double> xi_norms;  // empty when the optimizer has no xi

    std::vector<std::uint64_t> sample_steps;
    std::vector<OptState> samples;

    bool has_xi() const { return !xi_norms.empty(); }
    std::size_t rows() const { return steps.size(); }
};

}  // namespace kinopt
