#include "pinnfem/common/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pinnfem {

unsigned worker_count()
{
    if (const char* env = std::getenv("PINNFEM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

void for_chunks(std::size_t n, std::size_t chunks,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& body)
{
    if (n == 0 || chunks == 0) return;
    chunks = std::min(chunks, n);
    auto bounds = [&](std::size_t c) { return c * n / chunks; };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c, bounds(c), bounds(c + 1));
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < chunks; c += workers) {
                try {
                    body(c, bounds(c), bounds(c + 1));
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace pinnfem
