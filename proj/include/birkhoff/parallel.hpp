#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace birkhoff {

// Worker cap: BIRKHOFF_THREADS, default 1. Results are written to
// preallocated index slots, so the outcome is identical for any worker count.
inline unsigned worker_count() {
    if (const char* env = std::getenv("BIRKHOFF_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned workers = worker_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    workers = std::min<unsigned>(workers, std::thread::hardware_concurrency());
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace birkhoff
