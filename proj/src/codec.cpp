#include "zkfaith/codec.hpp"

namespace zkfaith {

void put(ByteWriter& w, const Scalar& s) { w.bytes(s.encode()); }
void put(ByteWriter& w, const G1& p) { w.bytes(p.encode()); }
void put(ByteWriter& w, const G2& p) { w.bytes(p.encode()); }
void put(ByteWriter& w, const GT& t) { w.bytes(t.encode()); }

namespace {

template <class F>
auto at_offset(ByteReader& r, F&& decode) {
    std::size_t off = r.offset();
    Bytes b = r.bytes();
    try {
        return decode(b);
    } catch (const DecodeError& e) {
        throw DecodeError(e.what(), off);
    } catch (const UsageError& e) {
        throw DecodeError(e.what(), off);
    }
}

template <class T, class F>
std::vector<T> get_many(ByteReader& r, F&& one) {
    std::uint32_t n = r.count(4);
    std::vector<T> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(one());
    return out;
}

}  // namespace

Scalar get_scalar(ByteReader& r, const GroupContext& ctx) {
    return at_offset(r, [&](const Bytes& b) { return Scalar::decode(ctx, b); });
}

G1 get_g1(ByteReader& r, const GroupContext& ctx) {
    return at_offset(r, [&](const Bytes& b) { return G1::decode(ctx, b); });
}

G2 get_g2(ByteReader& r, const GroupContext& ctx) {
    return at_offset(r, [&](const Bytes& b) { return G2::decode(ctx, b); });
}

GT get_gt(ByteReader& r, const GroupContext& ctx) {
    return at_offset(r, [&](const Bytes& b) { return GT::decode(ctx, b); });
}

std::vector<Scalar> get_scalars(ByteReader& r, const GroupContext& ctx) {
    return get_many<Scalar>(r, [&] { return get_scalar(r, ctx); });
}

std::vector<G1> get_g1s(ByteReader& r, const GroupContext& ctx) {
    return get_many<G1>(r, [&] { return get_g1(r, ctx); });
}

std::vector<G2> get_g2s(ByteReader& r, const GroupContext& ctx) {
    return get_many<G2>(r, [&] { return get_g2(r, ctx); });
}

void put_header(ByteWriter& w, std::uint8_t tag, std::uint8_t version) { w.u8(tag).u8(version); }

void expect_header(ByteReader& r, std::uint8_t tag, std::uint8_t version) {
    std::size_t off = r.offset();
    std::uint8_t t = r.u8();
    if (t != tag) throw DecodeError("unexpected artifact type " + std::to_string(t), off);
    std::uint8_t v = r.u8();
    if (v != version) throw VersionError("unsupported artifact version " + std::to_string(v));
}

}  // namespace zkfaith
