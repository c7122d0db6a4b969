#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rbffd {

/// Resolves a requested worker count; values below 1 mean "all hardware threads".
inline int resolve_threads(int requested) {
    if (requested >= 1) return requested;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Calls `body(begin, end)` on contiguous chunks of [0, count), chunks dealt
/// round-robin to `threads` workers. The first exception (by chunk order) is
/// rethrown after all workers have joined.
template <typename Body>
void parallel_for(std::size_t count, std::size_t chunk, int threads, Body&& body) {
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t chunks = (count + chunk - 1) / chunk;
    const auto workers = static_cast<std::size_t>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(chunks, 1)));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c * chunk, std::min(count, (c + 1) * chunk));
        return;
    }

    std::mutex guard;
    std::exception_ptr error;
    std::size_t error_chunk = chunks;
    auto work = [&](std::size_t worker) {
        for (std::size_t c = worker; c < chunks; c += workers) {
            try {
                body(c * chunk, std::min(count, (c + 1) * chunk));
            } catch (...) {
                std::lock_guard lock(guard);
                if (c < error_chunk) {
                    error_chunk = c;
                    error = std::current_exception();
                }
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
        work(0);
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace rbffd
