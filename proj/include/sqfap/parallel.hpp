#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace sqfap {

/// Worker count from SQFAP_WORKERS, falling back to 1.
inline unsigned default_workers() {
    if (const char* env = std::getenv("SQFAP_WORKERS")) {
        try {
            long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return 1;
}

namespace detail {

/// Sums f(i) over i in [lo, hi] split across workers. Integer sums are
/// order-independent, so the result does not depend on the split.
template <class F>
std::uint64_t parallel_sum(std::uint64_t lo, std::uint64_t hi, unsigned workers, F&& f) {
    if (hi < lo) return 0;
    const std::uint64_t span = hi - lo + 1;
    constexpr std::uint64_t kMinChunk = 1u << 14;
    if (workers <= 1 || span < 2 * kMinChunk) {
        std::uint64_t s = 0;
        for (std::uint64_t i = lo; i <= hi; ++i) s += f(i);
        return s;
    }
    const std::uint64_t nw = std::min<std::uint64_t>(workers, span / kMinChunk);
    std::vector<std::uint64_t> partial(nw, 0);
    std::vector<std::exception_ptr> errors(nw);
    std::vector<std::thread> threads;
    threads.reserve(nw);
    for (std::uint64_t w = 0; w < nw; ++w) {
        const std::uint64_t a = lo + span * w / nw;
        const std::uint64_t b = lo + span * (w + 1) / nw - 1;
        threads.emplace_back([&, w, a, b] {
            try {
                std::uint64_t s = 0;
                for (std::uint64_t i = a; i <= b; ++i) s += f(i);
                partial[w] = s;
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::uint64_t s = 0;
    for (auto p : partial) s += p;
    return s;
}

/// Runs f(i) for i in [0, n) across workers; each index owns its output slot.
template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& f) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(workers, n);
    std::vector<std::exception_ptr> errors(nw);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < nw; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += nw) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace detail
}  // namespace sqfap
