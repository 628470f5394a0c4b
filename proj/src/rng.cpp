#include "zkfaith/rng.hpp"

#include <openssl/rand.h>

#include "zkfaith/hash.hpp"

namespace zkfaith {

Rng::Rng(std::span<const std::uint8_t> seed) {
    ByteWriter w;
    w.str("zkfaith/rng/seed").bytes(seed);
    key_ = sha256(w.data());
}

Rng Rng::from_u64(std::uint64_t seed) {
    ByteWriter w;
    w.u64(seed);
    return Rng(w.data());
}

Rng Rng::system() {
    std::array<std::uint8_t, 32> seed{};
    if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1) throw Error("RAND_bytes failed");
    return Rng(seed);
}

void Rng::fill(std::span<std::uint8_t> out) {
    for (auto& b : out) {
        if (used_ == block_.size()) {
            ByteWriter w;
            w.raw(key_).u64(counter_++);
            block_ = sha512(w.data());
            used_ = 0;
        }
        b = block_[used_++];
    }
}

std::uint64_t Rng::next_u64() {
    std::array<std::uint8_t, 8> b{};
    fill(b);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
    if (bound == 0) throw UsageError("uniform bound must be positive");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        std::uint64_t v = next_u64();
        if (v < limit) return v % bound;
    }
}

Rng Rng::fork(std::string_view label, std::uint64_t index) const {
    ByteWriter w;
    w.raw(key_).str(label).u64(index);
    return Rng(w.data());
}

}  // namespace zkfaith
