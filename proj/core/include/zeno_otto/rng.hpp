#pragma once

#include <cstdint>

namespace zeno_otto {

// Counter-based splittable generator: each draw is a pure function of
// (master_seed, trajectory_index, step_index) through three chained
// SplitMix64 finalizer rounds. No stream state, so any degree of parallelism
// over trajectories reproduces identical samples.
namespace rng {

inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t key(std::uint64_t master_seed, std::uint64_t trajectory_index,
                         std::uint64_t step_index) {
    return mix(mix(mix(master_seed) ^ trajectory_index) ^ step_index);
}

// Uniform in [0, 1) with 53-bit resolution; bit-stable across platforms.
inline double uniform01(std::uint64_t master_seed, std::uint64_t trajectory_index,
                        std::uint64_t step_index) {
    return static_cast<double>(key(master_seed, trajectory_index, step_index) >> 11) * 0x1.0p-53;
}

}  // namespace rng

struct TrajectoryStream {
    std::uint64_t master_seed = 0;
    std::uint64_t trajectory_index = 0;
    double uniform(std::uint64_t step_index) const {
        return rng::uniform01(master_seed, trajectory_index, step_index);
    }
};

}  // namespace zeno_otto
