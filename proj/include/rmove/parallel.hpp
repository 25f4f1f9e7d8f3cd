#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace rmove {

/// Worker count: RMOVE_THREADS if set, else `configured`; 0 means run inline.
inline std::size_t worker_count(std::size_t configured) {
    if (const char* env = std::getenv("RMOVE_THREADS")) {
        try {
            return static_cast<std::size_t>(std::stoul(env));
        } catch (...) {
            return 0;
        }
    }
    return configured;
}

/// Calls fn(i) for i in [0, n) on up to `threads` workers, each on a contiguous
/// chunk. Results must be written to per-index slots so output order never
/// depends on scheduling. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min(threads, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace rmove
