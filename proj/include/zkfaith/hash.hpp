#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "zkfaith/bytes.hpp"

namespace zkfaith {

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);
std::array<std::uint8_t, 64> sha512(std::span<const std::uint8_t> data);

// Unambiguous multi-part encoding: every part (tag first) carries a 4-byte
// big-endian length prefix.
Bytes encode_parts(std::string_view tag, std::span<const Bytes> parts);

}  // namespace zkfaith
