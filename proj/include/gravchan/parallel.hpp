#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace gravchan {

/// Worker cap from GRAVCHAN_THREADS; 0 or unset means hardware concurrency.
std::size_t worker_count();

/// Calls body(i) for i in [0, n) over contiguous chunks. Each index is
/// visited exactly once, so writing results by index is order-independent.
/// The first exception thrown by any worker is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                const std::size_t end = std::min(n, (w + 1) * chunk);
                for (std::size_t i = w * chunk; i < end; ++i) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace gravchan
