#include "kakeya/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace kakeya {

namespace {
unsigned g_workers = 0;
}

void set_worker_count(unsigned n) { g_workers = n; }

unsigned worker_count() {
    if (g_workers > 0) return g_workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t, unsigned)>& fn) {
    if (n <= 0) return;
    const unsigned workers = std::min<std::int64_t>(worker_count(), n);
    if (workers <= 1) {
        fn(0, n, 0);
        return;
    }
    const std::int64_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
        const std::int64_t end = std::min<std::int64_t>(begin + chunk, n);
        if (begin >= end) break;
        threads.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
    }
    for (auto& t : threads) t.join();
}

} // namespace kakeya
