#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace fluxforge {

/// Chunked parallel loop writing into caller-owned slots; results are
/// identical for any thread count.
inline void parallel_for(long count, int threads, const std::function<void(long)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    int workers = std::min<long>(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (long i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline int default_threads() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace fluxforge
