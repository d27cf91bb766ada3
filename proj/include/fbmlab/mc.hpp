// mc.hpp -- deterministic multi-component Monte Carlo accumulation.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fbmlab/stats.hpp"

namespace fbmlab {

struct McStats {
    std::vector<MeanSE> comp;
    std::vector<double> min;
    std::vector<double> max;
    std::int64_t n = 0;
};

// Runs per_path(path_index, out) for every path, filling n_components values,
// and reduces mean/SE/min/max per component. Chunked fan-out with an ordered
// merge: results are bit-identical for any worker count.
McStats mc_accumulate(std::int64_t n_paths, int n_components,
                      const std::function<void(std::int64_t, double*)>& per_path);

} // namespace fbmlab
