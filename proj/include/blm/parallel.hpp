#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace blm {

/// Hardware concurrency, capped by the BLM_THREADS environment variable when
/// it holds a positive integer. Never returns 0.
unsigned default_thread_count();

/// Splits [0, n) into at most `threads` contiguous chunks and runs
/// fn(chunk_index, begin, end) for each, one thread per chunk. The first
/// exception thrown by any chunk is rethrown after all threads join.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = default_thread_count();
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
    if (chunks == 1) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t begin = n * c / chunks;
        const std::size_t end = n * (c + 1) / chunks;
        pool.emplace_back([&, c, begin, end] {
            try {
                fn(c, begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace blm
