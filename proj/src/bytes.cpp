#include "zkfaith/bytes.hpp"

#include <array>

namespace zkfaith {

Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

std::string to_hex(std::span<const std::uint8_t> b) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(b.size() * 2);
    for (auto v : b) {
        out.push_back(kDigits[v >> 4]);
        out.push_back(kDigits[v & 0xF]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    auto nibble = [&](char c, std::size_t pos) -> std::uint8_t {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw DecodeError("invalid hex digit", pos);
    };
    if (hex.size() % 2) throw DecodeError("odd-length hex string", hex.size());
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i], 2 * i) << 4 | nibble(hex[2 * i + 1], 2 * i + 1));
    }
    return out;
}

namespace {
}

ByteWriter& ByteWriter::u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
}

ByteWriter& ByteWriter::u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    return *this;
}

ByteWriter& ByteWriter::u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    return *this;
}

ByteWriter& ByteWriter::raw(std::span<const std::uint8_t> b) {
    out_.insert(out_.end(), b.begin(), b.end());
    return *this;
}

ByteWriter& ByteWriter::bytes(std::span<const std::uint8_t> b) {
    u32(static_cast<std::uint32_t>(b.size()));
    return raw(b);
}

ByteWriter& ByteWriter::str(std::string_view s) {
    return bytes(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

std::span<const std::uint8_t> ByteReader::raw(std::size_t n) {
    if (n > remaining()) throw DecodeError("truncated input", in_.size());
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint32_t ByteReader::u32() {
    auto b = raw(4);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

std::uint64_t ByteReader::u64() {
    auto b = raw(8);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

Bytes ByteReader::bytes() {
    std::size_t at = pos_;
    std::uint32_t n = u32();
    if (n > remaining()) throw DecodeError("length prefix exceeds input", at);
    auto b = raw(n);
    return Bytes(b.begin(), b.end());
}

std::string ByteReader::str() {
    Bytes b = bytes();
    return std::string(b.begin(), b.end());
}

void ByteReader::expect_end() const {
    if (pos_ != in_.size()) throw DecodeError("trailing bytes", pos_);
}

std::uint32_t ByteReader::count(std::size_t min_element_size) {
    std::size_t at = pos_;
    std::uint32_t n = u32();
    if (min_element_size > 0 && n > remaining() / min_element_size) {
        throw DecodeError("element count exceeds input", at);
    }
    return n;
}

}  // namespace zkfaith
