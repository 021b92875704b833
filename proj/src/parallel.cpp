#include "factorforge/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace factorforge {

namespace {

std::size_t read_thread_cap() {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0)
        n = 1;
    if (const char* env = std::getenv("FACTORFORGE_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            n = std::min<std::size_t>(n, v);
    }
    return n;
}

} // namespace

std::size_t worker_thread_count() {
    static const std::size_t cap = read_thread_cap();
    return cap;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0)
        return;
    const std::size_t workers = std::min(worker_thread_count(), n);
    if (workers <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    std::size_t begin = chunk;
    for (std::size_t t = 1; t < workers && begin < n; ++t) {
        const std::size_t end = std::min(begin + chunk, n);
        threads.emplace_back(fn, begin, end);
        begin = end;
    }
    fn(0, std::min(chunk, n));
    for (auto& th : threads)
        th.join();
}

} // namespace factorforge
