#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace bphi {

// Runs fn(i) for i in [0,n) across `workers` threads with static chunking.
// Each index owns its output slot, so results are identical for any worker
// count.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += nw) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace bphi
