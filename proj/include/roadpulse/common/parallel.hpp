#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace roadpulse {

// Runs fn(i) for i in [0, n). Work is striped across workers; results must be
// written to per-index slots so the outcome is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const auto w = static_cast<std::size_t>(workers);
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([t, w, n, &fn] {
            for (std::size_t i = t; i < n; i += w)
                fn(i);
        });
    }
    for (auto& th : pool)
        th.join();
}

} // namespace roadpulse
