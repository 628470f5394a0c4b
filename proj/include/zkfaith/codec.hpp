#pragma once

// Length-prefixed element codecs shared by every artifact type.

#include <optional>
#include <string>
#include <vector>

#include "zkfaith/bytes.hpp"
#include "zkfaith/errors.hpp"
#include "zkfaith/group.hpp"

namespace zkfaith {

void put(ByteWriter& w, const Scalar& s);
void put(ByteWriter& w, const G1& p);
void put(ByteWriter& w, const G2& p);
void put(ByteWriter& w, const GT& t);

template <class T>
void put_vec(ByteWriter& w, const std::vector<T>& v) {
    w.u32(static_cast<std::uint32_t>(v.size()));
    for (const auto& x : v) put(w, x);
}

// Readers report the offset of the offending field on failure.
Scalar get_scalar(ByteReader& r, const GroupContext& ctx);
G1 get_g1(ByteReader& r, const GroupContext& ctx);
G2 get_g2(ByteReader& r, const GroupContext& ctx);
GT get_gt(ByteReader& r, const GroupContext& ctx);

std::vector<Scalar> get_scalars(ByteReader& r, const GroupContext& ctx);
std::vector<G1> get_g1s(ByteReader& r, const GroupContext& ctx);
std::vector<G2> get_g2s(ByteReader& r, const GroupContext& ctx);

// Map and set entries are written in key order; a decoder accepting any
// other order would give one value two encodings.
template <class K>
class AscendingKeys {
public:
    explicit AscendingKeys(const char* what) : what_(what) {}
    void next(const K& k, std::size_t at) {
        if (last_ && !(*last_ < k)) throw DecodeError(std::string(what_) + " not strictly ascending", at);
        last_ = k;
    }

private:
    const char* what_;
    std::optional<K> last_;
};

// Artifact header: type tag and version byte.
void put_header(ByteWriter& w, std::uint8_t tag, std::uint8_t version);
void expect_header(ByteReader& r, std::uint8_t tag, std::uint8_t version);

}  // namespace zkfaith
