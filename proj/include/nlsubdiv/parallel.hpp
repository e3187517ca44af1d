#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nlsd {

/// splitmix64 of (root, trial): independent, reproducible per-trial seeds.
inline std::uint64_t trial_seed(std::uint64_t root, std::uint64_t trial) {
    std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Runs fn(t) for t in [0, trials) on up to `threads` workers (0 = hardware).
/// fn must only touch per-trial state; callers combine results by max/merge,
/// so the outcome does not depend on scheduling.
template <class Fn>
void for_each_trial(int trials, Fn&& fn, unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(trials, 1)));
    if (threads <= 1) {
        for (int t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::exception_ptr failure;
    std::mutex m;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int t = static_cast<int>(w); t < trials; t += static_cast<int>(threads)) fn(t);
            } catch (...) {
                std::lock_guard lock(m);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace nlsd
