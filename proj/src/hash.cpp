#include "zkfaith/hash.hpp"

#include <openssl/evp.h>

namespace zkfaith {
namespace {

template <std::size_t N>
std::array<std::uint8_t, N> digest(const EVP_MD* md, std::span<const std::uint8_t> data) {
    std::array<std::uint8_t, N> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, md, nullptr) != 1 || len != N) {
        throw Error("EVP_Digest failed");
    }
    return out;
}

}  // namespace

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
    return digest<32>(EVP_sha256(), data);
}

std::array<std::uint8_t, 64> sha512(std::span<const std::uint8_t> data) {
    return digest<64>(EVP_sha512(), data);
}

Bytes encode_parts(std::string_view tag, std::span<const Bytes> parts) {
    ByteWriter w;
    w.str(tag);
    for (const auto& p : parts) w.bytes(p);
    return w.take();
}

}  // namespace zkfaith
