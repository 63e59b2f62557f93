#pragma once

// Deterministic work distribution.  The index range is cut into fixed
// blocks; workers pull block indices from an atomic counter; each block
// writes only to its own slot (or to exactly-commutative accumulators
// such as integer counts).  Results are then reduced in block order by
// the caller, so every worker count produces identical output.

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace quadwalk {

inline constexpr std::int64_t kDefaultBlockSize = 4096;

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// fn(block_index, begin, end) with [begin,end) a subrange of [0,count).
template <class Fn>
void for_each_block(std::int64_t count, std::int64_t block_size, int workers, Fn&& fn) {
    if (count <= 0) return;
    if (block_size <= 0) block_size = kDefaultBlockSize;
    const std::int64_t nblocks = (count + block_size - 1) / block_size;
    workers = resolve_workers(workers);
    if (workers > nblocks) workers = static_cast<int>(nblocks);

    if (workers <= 1) {
        for (std::int64_t b = 0; b < nblocks; ++b)
            fn(b, b * block_size, std::min(count, (b + 1) * block_size));
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto drain = [&] {
        try {
            for (;;) {
                const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
                if (b >= nblocks) return;
                fn(b, b * block_size, std::min(count, (b + 1) * block_size));
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace quadwalk
