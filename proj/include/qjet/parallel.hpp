#ifndef QJET_PARALLEL_HPP
#define QJET_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qjet {

inline size_t resolve_threads(size_t requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = all cores).
/// Results must go to per-index slots; scheduling order is unspecified.
inline void parallel_for(size_t n, size_t threads, const std::function<void(size_t)>& fn) {
    threads = std::min(resolve_threads(threads), n);
    if (threads <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace qjet

#endif
