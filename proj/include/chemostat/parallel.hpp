#ifndef CHEMOSTAT_PARALLEL_HPP
#define CHEMOSTAT_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace chemostat {

/// Worker count from CHEMOSTAT_THREADS, else the hardware concurrency (at least 1).
std::size_t worker_count();

/**
 * @brief Calls fn(k) for k in [0, n) across worker threads.
 *
 * Each index is visited exactly once. The first exception thrown by any
 * call is rethrown on the calling thread after all workers stop.
 */
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t workers = worker_count()) {
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n || failed.load()) return;
            try {
                fn(k);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const std::size_t count = workers < n ? workers : n;
        pool.reserve(count);
        for (std::size_t t = 0; t < count; ++t) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace chemostat

#endif  // CHEMOSTAT_PARALLEL_HPP
