#ifndef IRFKIT_PARALLEL_HPP
#define IRFKIT_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace irfkit {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once and results must go into caller-owned slots, so
/// output is identical for any thread count.
inline void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(std::min<long>(threads, n));
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mx;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (long i = w; i < n; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mx);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace irfkit

#endif
