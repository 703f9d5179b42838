#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace fairflow {

// SplitMix64, used as a counter-based generator: every draw is a pure
// function of (seed, counter), so streams can be split without coupling.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    static uint64_t mix(uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // independent stream for a (seed, index) pair
    static SplitMix64 stream(uint64_t seed, uint64_t index) {
        return SplitMix64(mix(seed ^ mix(index + 0x6a09e667f3bcc909ULL)));
    }
};

// Number of worker threads: FAIRFLOW_THREADS when set (0 = auto), otherwise
// hardware concurrency.
int worker_threads();

// Runs fn(i) for i in [0, n) over a fixed chunk grid. The chunking does not
// depend on the thread count, so any per-chunk accumulation merged in chunk
// order is reproducible.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

std::string fnv1a_hex(const std::string& data);

}  // namespace fairflow
