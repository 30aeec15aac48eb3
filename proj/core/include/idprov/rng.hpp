#pragma once

#include <cstdint>
#include <vector>

namespace idprov {

/// Deterministic 64-bit generator (xoshiro256** seeded through splitmix64).
/// The output stream depends only on the seed, never on the platform or
/// standard library, so sampling experiments replicate bit-for-bit.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();

    /// Uniform draw in [0, bound) by rejection; unbiased. bound must be >= 1.
    std::uint64_t below(std::uint64_t bound);

    /// In-place Fisher-Yates using below().
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t state_[4];
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Sub-seed for an indexed stream (e.g. trial number or subject index):
/// mix64(seed + GOLDEN_GAMMA * (stream + 1)). Documented so single trials
/// can be replayed in isolation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace idprov
