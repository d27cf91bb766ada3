// parallel.cpp
#include "fbmlab/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fbmlab {

namespace {
std::atomic<int> g_threads{0};
}

void set_worker_threads(int n) { g_threads.store(n < 0 ? 0 : n); }

int worker_threads() {
    const int n = g_threads.load();
    if (n > 0) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(std::int64_t total, std::int64_t chunk_size,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& work,
                     const std::function<void(std::int64_t)>& merge) {
    if (total <= 0) return;
    if (chunk_size <= 0) chunk_size = kDefaultChunk;
    const std::int64_t n_chunks = (total + chunk_size - 1) / chunk_size;
    const int n_workers = static_cast<int>(
        std::min<std::int64_t>(worker_threads(), n_chunks));

    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto run = [&] {
        for (;;) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            const std::int64_t begin = c * chunk_size;
            const std::int64_t end = std::min(total, begin + chunk_size);
            try {
                work(c, begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    if (n_workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    for (std::int64_t c = 0; c < n_chunks; ++c) merge(c);
}

} // namespace fbmlab
