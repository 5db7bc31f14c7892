#include "hexcap/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace hexcap {

unsigned thread_count()
{
    if (const char* env = std::getenv("HEXCAP_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return static_cast<unsigned>(t);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& fn)
{
    std::ptrdiff_t t = std::min<std::ptrdiff_t>(thread_count(), n);
    if (t <= 1 || n < 64) {
        for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(t);
    for (std::ptrdiff_t w = 0; w < t; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::ptrdiff_t i = w * n / t; i < (w + 1) * n / t; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace hexcap
