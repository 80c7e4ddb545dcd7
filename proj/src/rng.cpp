#include "vqocc/rng.hpp"

namespace vqocc {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view role) {
    std::uint64_t state = master ^ fnv1a64(role);
    return splitmix64(state);
}

Rng::Rng(std::uint64_t seed) {
    // Seed expansion via SplitMix64, the recommended initializer for xoshiro.
    for (auto& word : s_)
        word = splitmix64(seed);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_angle() {
    constexpr double two_pi = 6.283185307179586476925286766559;
    return uniform() * two_pi;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
    // Rejection sampling over the smallest covering power of two.
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t x;
    do {
        x = next_u64() & mask;
    } while (x >= bound);
    return x;
}

} // namespace vqocc
