#pragma once

// Ordered work pool: tasks 0..count-1 are handed out in index order, and the
// reported winner is the least index that produced a hit. Results do not depend
// on the thread count when `deterministic` is set.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

namespace pforge {

template <class T> struct ShardResult {
    std::optional<T> hit;
    std::uint64_t nodes = 0;
    bool truncated = false; // stopped at the node budget before finishing
};

template <class T> struct OrderedRun {
    // results[i] is set for every task that ran to completion. In deterministic
    // mode all tasks up to `winner` (or all tasks, without a winner) are set.
    std::vector<std::optional<ShardResult<T>>> results;
    std::optional<std::size_t> winner;
};

template <class T, class Fn>
OrderedRun<T> run_ordered(std::size_t count, unsigned threads, bool deterministic, Fn &&fn) {
    OrderedRun<T> run;
    run.results.resize(count);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{count};

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            const std::size_t current_best = best.load();
            if (deterministic ? i > current_best : current_best < count)
                return;
            ShardResult<T> r = fn(i);
            const bool hit = r.hit.has_value();
            run.results[i] = std::move(r);
            if (hit) {
                std::size_t seen = best.load();
                while (i < seen && !best.compare_exchange_weak(seen, i)) {
                }
            }
        }
    };

    if (threads <= 1) {
        worker();
    }
    else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    if (best.load() < count)
        run.winner = best.load();
    return run;
}

} // namespace pforge
