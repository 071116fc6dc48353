#include "diffred/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace diffred {

int default_thread_count() {
    if (const char* env = std::getenv("DIFFRED_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) {
            return n;
        }
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

int resolve_threads(int requested) {
    return requested >= 1 ? requested : default_thread_count();
}

void parallel_blocks(std::size_t total, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (total == 0) {
        return;
    }
    threads = resolve_threads(threads);

    // Block count fixed by the problem size only.
    std::size_t num_blocks = std::min<std::size_t>(total, 256);
    std::size_t chunk = (total + num_blocks - 1) / num_blocks;
    num_blocks = (total + chunk - 1) / chunk;

    if (threads == 1 || num_blocks == 1) {
        for (std::size_t b = 0; b < num_blocks; ++b) {
            std::size_t begin = b * chunk;
            fn(b, begin, std::min(begin + chunk, total));
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= num_blocks) {
                return;
            }
            std::size_t begin = b * chunk;
            fn(b, begin, std::min(begin + chunk, total));
        }
    };

    std::vector<std::thread> pool;
    int nworkers = std::min<int>(threads, static_cast<int>(num_blocks));
    pool.reserve(static_cast<std::size_t>(nworkers - 1));
    for (int t = 1; t < nworkers; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
}

} // namespace diffred
