#pragma once

// Chunked, seed-derived random streams. Work is cut into fixed-size chunks
// whose RNG depends only on (seed, chunk index); callers store per-chunk
// results and reduce them in chunk order, so output does not depend on the
// number of workers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace fpt {

inline constexpr std::size_t kDefaultChunkSize = 4096;

/// Engine for chunk `chunk` of a run seeded with `seed`.
inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32),
                      0x9e3779b9u};
    return std::mt19937_64(seq);
}

/// Worker count: FPT_THREADS when set to a positive integer, else the
/// hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("FPT_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline std::size_t chunk_count(std::size_t n_items, std::size_t chunk_size) {
    return (n_items + chunk_size - 1) / chunk_size;
}

/// Calls fn(chunk, begin, end) for every chunk of [0, n_items), on up to
/// `workers` threads. The first exception thrown by any chunk is rethrown.
template <class Fn>
void for_each_chunk(std::size_t n_items, std::size_t chunk_size, int workers, Fn&& fn) {
    const std::size_t chunks = chunk_count(n_items, chunk_size);
    auto run_chunk = [&](std::size_t c) {
        const std::size_t begin = c * chunk_size;
        fn(c, begin, std::min(n_items, begin + chunk_size));
    };
    const auto threads = static_cast<std::size_t>(std::max(1, workers));
    if (threads == 1 || chunks <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t c = next++; c < chunks; c = next++) {
            try {
                run_chunk(c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < std::min(threads, chunks); ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace fpt
