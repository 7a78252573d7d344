#pragma once

#include <cstdint>

namespace scanguard {

// Small deterministic generator: splitmix64 state advance with Box-Muller
// normals. Behaves identically across platforms, which keeps golden-master
// fixtures stable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Stream for replicate r of a study seeded with base_seed.
    static Rng for_replicate(std::uint64_t base_seed, std::uint64_t replicate);

    std::uint64_t next_u64();

    // Uniform in (0, 1).
    double uniform();

    // Uniform integer in [0, bound) without modulo bias.
    std::uint64_t uniform_below(std::uint64_t bound);

    double normal();

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace scanguard
