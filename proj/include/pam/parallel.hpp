#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace pam {

// Default worker count: PAMLAB_WORKERS if set, else hardware concurrency.
inline int default_workers() {
    if (const char* env = std::getenv("PAMLAB_WORKERS")) {
        int w = std::atoi(env);
        if (w >= 1) return w;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(begin, end) over [0, count) in chunks. Results must be written to
// per-index slots; the chunk-to-worker assignment is dynamic, so reductions
// over shared accumulators would not be deterministic, indexed writes are.
template <typename Fn>
void parallel_for_blocks(std::int64_t count, int workers, std::int64_t block,
                         Fn&& fn) {
    if (count <= 0) return;
    if (workers <= 1 || count <= block) {
        fn(static_cast<std::int64_t>(0), count);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto run = [&]() {
        for (;;) {
            std::int64_t begin = next.fetch_add(block);
            if (begin >= count) return;
            fn(begin, std::min(begin + block, count));
        }
    };
    std::vector<std::thread> pool;
    int nthreads = static_cast<int>(std::min<std::int64_t>(workers, (count + block - 1) / block));
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(run);
    for (auto& th : pool) th.join();
}

// Fixed-order pairwise reduction: the summation tree depends only on the
// number of terms, never on worker scheduling.
inline double reduce_fixed_order(const std::vector<double>& terms) {
    if (terms.empty()) return 0.0;
    std::vector<double> level = terms;
    while (level.size() > 1) {
        std::size_t half = (level.size() + 1) / 2;
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) level[i / 2] = level[i] + level[i + 1];
        if (level.size() % 2 == 1) level[half - 1] = level.back();
        level.resize(half);
    }
    return level[0];
}

} // namespace pam
