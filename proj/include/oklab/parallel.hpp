#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace oklab {

/// Worker count: hardware concurrency capped by the OKLAB_THREADS env var.
inline int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("OKLAB_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) hw = std::min(hw, cap);
        } catch (const std::exception&) {
            // ignore malformed values; fall back to hardware count
        }
    }
    return hw;
}

/// Runs body(i) for i in [begin, end) on the worker pool. Work is chunked by
/// index, so any reduction the caller performs over per-index slots in index
/// order is deterministic regardless of the thread count.
template <typename Body>
void parallel_for(int begin, int end, const Body& body) {
    const int count = end - begin;
    if (count <= 0) return;
    const int workers = std::min(worker_count(), count);
    if (workers == 1) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = begin + w; i < end; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace oklab
