#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zkfaith/errors.hpp"

namespace zkfaith {

using Bytes = std::vector<std::uint8_t>;

Bytes to_bytes(std::string_view s);
std::string to_hex(std::span<const std::uint8_t> b);
Bytes from_hex(std::string_view hex);
std::string base64url_encode(std::span<const std::uint8_t> b);
Bytes base64url_decode(std::string_view s);  // DecodeError on non-canonical input

// Append-only canonical encoder: big-endian integers and 4-byte big-endian
// length prefixes.
class ByteWriter {
public:
    ByteWriter& u8(std::uint8_t v);
    ByteWriter& u32(std::uint32_t v);
    ByteWriter& u64(std::uint64_t v);
    ByteWriter& raw(std::span<const std::uint8_t> b);
    ByteWriter& bytes(std::span<const std::uint8_t> b);  // length-prefixed
    ByteWriter& str(std::string_view s);                 // length-prefixed
    const Bytes& data() const { return out_; }
    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::span<const std::uint8_t> raw(std::size_t n);
    Bytes bytes();  // length-prefixed
    std::string str();
    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return in_.size() - pos_; }
    // Throws DecodeError when trailing bytes remain.
    void expect_end() const;
    // Bounded element count: rejects counts that could not fit in the input.
    std::uint32_t count(std::size_t min_element_size = 1);

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

}  // namespace zkfaith
