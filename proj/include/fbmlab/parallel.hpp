// parallel.hpp -- deterministic fan-out over independent path indices.
#pragma once

#include <cstdint>
#include <functional>

namespace fbmlab {

// Global worker count (0 = hardware concurrency). Set once at startup.
void set_worker_threads(int n);
int worker_threads();

// Partitions [0, total) into fixed-size chunks (independent of the worker
// count), hands chunks to a thread pool, then calls merge(chunk_index) for
// every chunk in ascending order on the calling thread. Per-chunk results must
// be stored by chunk index inside `work`; the ordered merge makes any
// floating-point reduction independent of scheduling.
void parallel_chunks(std::int64_t total, std::int64_t chunk_size,
                     const std::function<void(std::int64_t chunk_index,
                                              std::int64_t begin,
                                              std::int64_t end)>& work,
                     const std::function<void(std::int64_t chunk_index)>& merge);

inline constexpr std::int64_t kDefaultChunk = 1024;

} // namespace fbmlab
