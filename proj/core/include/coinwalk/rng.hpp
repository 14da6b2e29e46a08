#pragma once

// Deterministic generator used for random inputs and branch sampling.
// xoshiro256++ seeded through splitmix64; Box-Muller for normals. Kept
// self-contained so identical seeds give identical streams on every platform.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "coinwalk/linalg.hpp"

namespace coinwalk {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            s = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Complex complex_gaussian() { return {gaussian(), gaussian()}; }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t state_[4]{};
};

// Haar-like random pure state of the given dimension.
inline Vec random_state_vector(std::size_t dim, Rng& rng) {
    Vec v(dim);
    for (auto& c : v) c = rng.complex_gaussian();
    return vec_normalized(std::move(v));
}

} // namespace coinwalk
