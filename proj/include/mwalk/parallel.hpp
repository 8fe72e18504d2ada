#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace mwalk::par {

// Worker count: MWALK_THREADS, else hardware concurrency.
inline int thread_count() {
    if (const char* env = std::getenv("MWALK_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Runs f(0..count-1) across workers.  Each index owns its output slot, so
// results do not depend on scheduling.
template <class F>
void parallel_for(std::size_t count, F&& f) {
    const int workers = std::min<std::size_t>(thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                f(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace mwalk::par
