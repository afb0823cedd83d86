#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace depsgd {

/// Runs fn(i) for i in [0, n) across `jobs` threads. Each index writes
/// only its own output slot, so results are identical for any job count.
inline void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    if (jobs <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = std::min(jobs, n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace depsgd
