#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace tripod {

/// Worker count for sweeps: TRIPOD_SIM_THREADS if set (0 = auto), otherwise
/// hardware concurrency.
inline unsigned sweep_threads()
{
    unsigned n = 0;
    if (const char* env = std::getenv("TRIPOD_SIM_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0)
                n = static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    if (n == 0)
        n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

/// Runs body(i) for i in [0, count). Indices are split into contiguous
/// blocks; each index is evaluated exactly once, so results written by index
/// are identical to a serial run. If any call throws, the exception from the
/// lowest failing index is rethrown.
template <typename Body>
void parallel_for(std::size_t count, Body&& body, unsigned threads = sweep_threads())
{
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
    std::vector<std::exception_ptr> errors(count);
    auto run_block = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        run_block(0, count);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (count + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            if (begin >= end)
                break;
            pool.emplace_back(run_block, begin, end);
        }
        for (auto& th : pool)
            th.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace tripod
