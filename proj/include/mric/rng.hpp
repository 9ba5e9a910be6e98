#pragma once

#include <cmath>
#include <cstdint>

namespace mric {

// SplitMix64 generator. Every stochastic choice in the project goes
// through this so that seeded runs are bit-identical across platforms
// and standard-library versions.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, n), n > 0. Lemire multiply-shift; the tiny
    // modulo bias is irrelevant here and the mapping is platform-stable.
    uint64_t uniform_index(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    float uniform01f() { return static_cast<float>(next_u64() >> 40) * 0x1.0p-24f; }

    bool coin() { return (next_u64() >> 63) != 0; }

    // Box-Muller. Guards against log(0).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = uniform01();
        double v = uniform01();
        if (u < 0x1.0p-60) u = 0x1.0p-60;
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

  private:
    uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stateless per-index stream derivation: hash(seed, index) seeds an
// independent Rng, so work items can be generated in any order (or in
// parallel) without changing the result.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    uint64_t z = seed ^ (0x9e3779b97f4a7c15ull + index * 0xd1b54a32d192ed03ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace mric
