// mc.cpp
#include "fbmlab/mc.hpp"

#include <algorithm>
#include <limits>

#include "fbmlab/parallel.hpp"

namespace fbmlab {

McStats mc_accumulate(std::int64_t n_paths, int n_components,
                      const std::function<void(std::int64_t, double*)>& per_path) {
    struct ChunkAcc {
        std::vector<KahanSum> sx, sxx;
        std::vector<double> mn, mx;
    };
    const std::int64_t chunk = kDefaultChunk;
    const std::int64_t n_chunks = (n_paths + chunk - 1) / chunk;
    std::vector<ChunkAcc> partials(n_chunks);

    parallel_chunks(
        n_paths, chunk,
        [&](std::int64_t ci, std::int64_t begin, std::int64_t end) {
            ChunkAcc acc;
            acc.sx.resize(n_components);
            acc.sxx.resize(n_components);
            acc.mn.assign(n_components, std::numeric_limits<double>::infinity());
            acc.mx.assign(n_components, -std::numeric_limits<double>::infinity());
            std::vector<double> vals(n_components);
            for (std::int64_t p = begin; p < end; ++p) {
                per_path(p, vals.data());
                for (int k = 0; k < n_components; ++k) {
                    acc.sx[k].add(vals[k]);
                    acc.sxx[k].add(vals[k] * vals[k]);
                    acc.mn[k] = std::min(acc.mn[k], vals[k]);
                    acc.mx[k] = std::max(acc.mx[k], vals[k]);
                }
            }
            partials[ci] = std::move(acc);
        },
        [&](std::int64_t) {});

    McStats out;
    out.n = n_paths;
    out.comp.resize(n_components);
    out.min.assign(n_components, std::numeric_limits<double>::infinity());
    out.max.assign(n_components, -std::numeric_limits<double>::infinity());
    std::vector<KahanSum> sx(n_components), sxx(n_components);
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        for (int k = 0; k < n_components; ++k) {
            sx[k].merge(partials[c].sx[k]);
            sxx[k].merge(partials[c].sxx[k]);
            out.min[k] = std::min(out.min[k], partials[c].mn[k]);
            out.max[k] = std::max(out.max[k], partials[c].mx[k]);
        }
    }
    for (int k = 0; k < n_components; ++k) out.comp[k] = mean_se(sx[k], sxx[k], n_paths);
    return out;
}

} // namespace fbmlab
