#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace parafield {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw > 8 ? 8 : hw);
}

// Static range partition. Each chunk writes to disjoint slots, so the result
// is independent of the number of workers; any cross-item reduction must be
// done by the caller in index order.
inline void parallel_for(uint64_t count, int threads,
                         const std::function<void(uint64_t begin, uint64_t end)>& body) {
    threads = resolve_threads(threads);
    if (threads <= 1 || count < 2) {
        body(0, count);
        return;
    }
    const uint64_t workers = std::min<uint64_t>(static_cast<uint64_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (uint64_t w = 0; w < workers; ++w) {
        const uint64_t begin = count * w / workers;
        const uint64_t end = count * (w + 1) / workers;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace parafield
