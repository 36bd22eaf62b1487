#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace excision {

/// Number of workers to use when the caller asks for 0 ("all cores").
inline unsigned resolve_workers(unsigned requested) noexcept
{
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

/**
 * Evaluates f(0), ..., f(n-1) on `workers` threads and returns the results
 * in index order. Work is handed out in fixed-size chunks; results never
 * depend on which thread computed them. If any call throws, the exception of
 * the smallest failing index is rethrown once every index has been tried.
 */
template <class F>
auto parallel_map(std::size_t n, unsigned workers, F&& f)
    -> std::vector<std::invoke_result_t<F&, std::size_t>>
{
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> out(n);
    const unsigned w = std::max(1u, std::min<unsigned>(resolve_workers(workers),
                                                       static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    constexpr std::size_t chunk = 16;
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::size_t err_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr err;

    auto run = [&]() {
        for (;;) {
            std::size_t begin = next.fetch_add(chunk);
            if (begin >= n) return;
            std::size_t end = std::min(n, begin + chunk);
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (i < err_index) {
                        err_index = i;
                        err = std::current_exception();
                    }
                }
            }
        }
    };

    if (w == 1) {
        run();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(w);
        for (unsigned k = 0; k < w; ++k) threads.emplace_back(run);
        for (auto& t : threads) t.join();
    }
    if (err) std::rethrow_exception(err);
    return out;
}

} // namespace excision
