#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace phf {

/// Runs body(block) for block in [0, n_blocks) on up to `threads` workers.
/// Work is partitioned into caller-defined blocks, so results never depend on
/// the thread count as long as each block writes only its own outputs.
template <class Body>
void parallel_blocks(std::size_t n_blocks, unsigned threads, Body&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_blocks)));
    if (threads <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) body(b);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t b = w; b < n_blocks; b += threads) body(b);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// Default worker count: PHONON_HEATFLOW_THREADS if set, else hardware concurrency.
unsigned default_thread_count();

}  // namespace phf
