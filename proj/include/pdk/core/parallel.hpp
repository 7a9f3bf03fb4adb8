#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pdk {

// Worker count: hardware concurrency capped by the PDK_THREADS environment
// variable (values < 1 are treated as 1).
inline unsigned thread_budget() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("PDK_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
        if (cap >= 1 && static_cast<unsigned>(cap) >= n) n = static_cast<unsigned>(cap);
        if (cap < 1) n = 1;
    }
    return n;
}

// Run body(i) for i in [0, count) on the available workers.  The partition is
// deterministic (contiguous blocks); results written by index never depend on
// the worker count.  The first exception thrown by any worker is rethrown on
// the calling thread.
template <typename Body>
void parallel_for(std::size_t count, const Body& body) {
    const unsigned workers = thread_budget();
    if (workers <= 1 || count < 2 * workers) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::mutex err_mutex;
    std::exception_ptr first_error;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        if (lo >= count) break;
        const std::size_t hi = std::min(count, lo + chunk);
        pool.emplace_back([lo, hi, &body, &err_mutex, &first_error] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace pdk
