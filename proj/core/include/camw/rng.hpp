#pragma once

#include <cstdint>
#include <random>

namespace camw {

/// splitmix64 step; used to derive independent stream seeds from one master
/// seed so that unrelated streams stay decoupled.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Mixes a tag into a seed, giving a decorrelated child seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (tag + 1));
    std::uint64_t v = splitmix64(s);
    return v ^ splitmix64(s);
}

/// One deterministic uniform stream. Doubles are produced from the raw engine
/// output directly (not through std::uniform_real_distribution) so traces are
/// bit-identical across standard library implementations.
class RngStream {
  public:
    RngStream() : engine_(0) {}
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double next_uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool next_bernoulli(double p) { return next_uniform() < p; }

    /// Uniform index in [0, k).
    std::uint32_t next_index(std::uint32_t k) {
        if (k <= 1) return 0;
        auto idx = static_cast<std::uint32_t>(next_uniform() * k);
        return idx < k ? idx : k - 1;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace camw
