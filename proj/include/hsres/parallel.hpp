#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hsres {

// Worker count: RESONANCE_THREADS if set and positive, else hardware concurrency.
int thread_cap();

// Evaluates f(0..n-1) on up to thread_cap() threads; results keep index order.
template <class F>
auto parallel_map(std::size_t n, F&& f) -> std::vector<decltype(f(std::size_t{0}))> {
    using T = decltype(f(std::size_t{0}));
    std::vector<T> out(n);
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(thread_cap()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    auto body = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace hsres
