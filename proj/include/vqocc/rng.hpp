#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace vqocc {

// SplitMix64 step; used both as a stand-alone mixer and to derive sub-seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent sub-stream seed from a master seed and a role tag,
// so that e.g. parameter init and data splitting can be varied separately.
std::uint64_t derive_seed(std::uint64_t master, std::string_view role);

// Deterministic xoshiro256** generator. We do not use std::mt19937_64 with
// std::uniform_* distributions because their output is implementation
// defined; experiment records must be reproducible across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform();

    // Uniform double in [0, 2*pi).
    double uniform_angle();

    // Uniform integer in [0, bound); bound must be nonzero.
    std::uint64_t uniform_below(std::uint64_t bound);

    // Fisher-Yates shuffle.
    template <typename T> void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t s_[4];
};

} // namespace vqocc
