#pragma once

// Deterministic chunked parallelism. The chunk decomposition depends only on
// the problem size, never on the worker count, and partial results are
// combined in chunk order, so floating-point output is identical at any
// number of workers.

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace edlab {

inline constexpr std::size_t kSumLeaf = 4096;

/// Calls fn(chunk_index) for every chunk in [0, chunks) on up to `workers` threads.
template <typename Fn>
void parallel_chunks(std::size_t chunks, unsigned workers, Fn&& fn) {
    workers = std::max(1u, workers);
    if (workers == 1 || chunks <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                fn(c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks);
            }
        }
    };
    std::vector<std::jthread> pool;
    unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
    pool.reserve(n - 1);
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(body);
    body();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

/// Pairwise reduction of an array of partial sums, in index order.
template <typename T>
T pairwise_reduce(std::vector<T> parts) {
    if (parts.empty()) return T{};
    while (parts.size() > 1) {
        std::size_t half = (parts.size() + 1) / 2;
        for (std::size_t i = 0; i < parts.size() / 2; ++i)
            parts[i] = parts[2 * i] + parts[2 * i + 1];
        if (parts.size() % 2) parts[half - 1] = parts.back();
        parts.resize(half);
    }
    return parts.front();
}

/// Sum of term(i) for i in [begin, end): sequential leaves of kSumLeaf terms,
/// then a pairwise tree over the leaves.
template <typename T, typename Term>
T deterministic_sum(std::size_t begin, std::size_t end, Term&& term, unsigned workers = 1) {
    if (end <= begin) return T{};
    std::size_t n = end - begin;
    std::size_t chunks = (n + kSumLeaf - 1) / kSumLeaf;
    std::vector<T> parts(chunks);
    parallel_chunks(chunks, workers, [&](std::size_t c) {
        std::size_t lo = begin + c * kSumLeaf;
        std::size_t hi = std::min(end, lo + kSumLeaf);
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        parts[c] = acc;
    });
    return pairwise_reduce(std::move(parts));
}

} // namespace edlab
