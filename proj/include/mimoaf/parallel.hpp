#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mimoaf
{
    // Worker count: MIMO_AMBIG_THREADS caps it, 0 or unset means hardware concurrency.
    inline std::size_t worker_count()
    {
        std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
        if (const char *env = std::getenv("MIMO_AMBIG_THREADS"))
        {
            char *end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v > 0)
                return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
        }
        return hw;
    }

    // Runs body(i) for i in [0, count). Each index is handled by exactly one
    // worker and writes only its own output slot, so results do not depend on
    // the worker count.
    template <typename Body>
    void parallel_for(std::size_t count, Body &&body)
    {
        std::size_t workers = std::min(worker_count(), count);
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }

        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
        {
            pool.emplace_back([&, w]
                              {
                try
                {
                    for (std::size_t i = w; i < count; i += workers)
                        body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                } });
        }
        for (auto &t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }
}
