#include "fairflow/util.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fairflow {

int worker_threads() {
    int n = 0;
    if (const char* env = std::getenv("FAIRFLOW_THREADS")) {
        n = std::atoi(env);
        if (n < 0) n = 0;
    }
    if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return n;
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    const int workers = worker_threads();
    if (workers <= 1 || n < 1024) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next_chunk{0};
    const size_t chunk = (n + 255) / 256;  // fixed grid of at most 256 chunks
    auto body = [&] {
        while (true) {
            const size_t c = next_chunk.fetch_add(1);
            const size_t lo = c * chunk;
            if (lo >= n) break;
            const size_t hi = std::min(n, lo + chunk);
            for (size_t i = lo; i < hi; ++i) fn(i);
        }
    };
    std::vector<std::thread> ts;
    for (int t = 0; t < workers; ++t) ts.emplace_back(body);
    for (auto& t : ts) t.join();
}

std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace fairflow
