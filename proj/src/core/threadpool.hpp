#pragma once

// Minimal fixed-size worker pool for embarrassingly parallel experiment
// cells. Results must be written to pre-sized slots so aggregation order
// stays deterministic.

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace pam {

inline void parallel_for(size_t n, int threads, const std::function<void(size_t)>& body) {
    if (threads <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    const int nt = int(std::min<size_t>(size_t(threads), n));
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace pam
