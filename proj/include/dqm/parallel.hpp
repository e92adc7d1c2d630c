#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace dqm {

// Worker count: an explicit positive request wins, then DQM_JOBS, then the
// hardware concurrency.
inline int resolve_jobs(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("DQM_JOBS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// out[i] = f(i) for i < n on a small pool. Results keep index order; the
// first exception thrown by any task is rethrown after all workers join.
template <class F>
auto parallel_map(std::size_t n, F f, int jobs = 0) -> std::vector<decltype(f(std::size_t{0}))> {
    using T = decltype(f(std::size_t{0}));
    std::vector<T> out(n);
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(resolve_jobs(jobs)), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                out[i] = f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace dqm
