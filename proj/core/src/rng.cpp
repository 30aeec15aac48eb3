#include "idprov/rng.hpp"

namespace idprov {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed + kGoldenGamma * (stream + 1));
}

Rng::Rng(std::uint64_t seed) {
    // splitmix64 expansion; guarantees a nonzero xoshiro state.
    std::uint64_t s = seed;
    for (auto& word : state_) {
        s += kGoldenGamma;
        word = mix64(s);
    }
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

std::uint64_t Rng::below(std::uint64_t bound) {
    // Rejection sampling over the largest multiple of bound.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t draw = next();
        if (draw >= threshold) return draw % bound;
    }
}

}  // namespace idprov
