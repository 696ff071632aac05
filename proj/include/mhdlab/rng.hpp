// rng.hpp: counter-based random streams.
//
// Every stream is a pure function of (seed, stream id), so work split across
// any number of threads reproduces the same draws.
#pragma once

#include <cstdint>

namespace mhdlab {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t next() noexcept { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Uniform in [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace mhdlab
