#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "zkfaith/bytes.hpp"

namespace zkfaith {

// Deterministic generator: SHA-512 over (seed, counter). Every randomized
// operation takes one of these explicitly; there is no global generator.
class Rng {
public:
    explicit Rng(std::span<const std::uint8_t> seed);
    static Rng from_u64(std::uint64_t seed);
    // Seeded from the operating system.
    static Rng system();

    void fill(std::span<std::uint8_t> out);
    std::uint64_t next_u64();
    // Uniform in [0, bound), bound > 0.
    std::uint64_t uniform(std::uint64_t bound);
    // Independent child stream, e.g. one per experiment trial.
    // Derived from the seed only, so it does not advance this stream.
    Rng fork(std::string_view label, std::uint64_t index) const;

private:
    std::array<std::uint8_t, 32> key_{};
    std::uint64_t counter_ = 0;
    std::array<std::uint8_t, 64> block_{};
    std::size_t used_ = 64;
};

}  // namespace zkfaith
