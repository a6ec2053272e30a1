#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace learnlab {

/// Thread cap from LEARNLAB_THREADS (default: hardware concurrency).
inline int thread_cap() {
    if (const char* env = std::getenv("LEARNLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, count). Work items must be independent; each
/// derives its own seed from its index, so the schedule cannot affect
/// results. Reductions happen on the caller side in index order.
template <typename Fn>
void parallel_for_index(int count, Fn&& fn) {
    const int threads = std::min(thread_cap(), std::max(count, 1));
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace learnlab
