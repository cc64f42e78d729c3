#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace spdc {

/// Run fn(i) for i in [0, n) on up to `threads` workers, each owning a
/// contiguous block. Results must be written to disjoint slots indexed by
/// i; reductions over the filled storage stay sequential so outputs do
/// not depend on the thread count.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::clamp(threads, 1, n > 0 ? n : 1);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int begin = t * chunk;
        const int end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (int i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace spdc
