#include <algorithm>

#include "zkfaith/bn254/curve.hpp"

namespace zkfaith::bn254 {
namespace {

constexpr Limbs kR = {0x43e1f593f0000001ULL, 0x2833e84879b97091ULL, 0xb85045b68181585dULL,
                      0x30644e72e131a029ULL};

Limbs limbs_from_be(std::span<const std::uint8_t> b) {
    Limbs out{};
    for (int i = 0; i < 32; ++i) {
        out[3 - i / 8] |= static_cast<std::uint64_t>(b[i]) << (8 * (7 - i % 8));
    }
    return out;
}

void limbs_to_be(const Limbs& l, std::uint8_t* out) {
    for (int i = 0; i < 32; ++i) out[i] = static_cast<std::uint8_t>(l[3 - i / 8] >> (8 * (7 - i % 8)));
}

bool is_below(const Limbs& a, const Limbs& b) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

// Reduces an arbitrary 256-bit value into Fp.
Fp reduce256(Limbs x) {
    const Limbs& p = modulus();
    while (!is_below(x, p)) {
        std::uint64_t borrow = 0;
        for (int i = 0; i < 4; ++i) {
            unsigned __int128 d = static_cast<unsigned __int128>(x[i]) - p[i] - borrow;
            x[i] = static_cast<std::uint64_t>(d);
            borrow = static_cast<std::uint64_t>(d >> 64) & 1;
        }
    }
    return *Fp::from_canonical(x);
}

constexpr std::uint8_t kInfinityFlag = 0x80;
constexpr std::uint8_t kSignFlag = 0x40;

}  // namespace

const Fp& CurveParams<Fp>::b() {
    static const Fp b = Fp::from_u64(3);
    return b;
}

const Fp2& CurveParams<Fp2>::b() {
    static const Fp2 b = Fp2{Fp::from_u64(3), Fp::zero()} * Fp2{Fp::from_u64(9), Fp::one()}.inverse();
    return b;
}

const Limbs& group_order() { return kR; }

const G1Point& g1_generator() {
    static const G1Point g = G1Point::from_affine({Fp::one(), Fp::from_u64(2), false});
    return g;
}

const G2Point& g2_generator() {
    static const G2Point h = [] {
        auto dec = [](const char* hex) {
            Limbs l{};
            for (int i = 0; i < 64; ++i) {
                char c = hex[i];
                std::uint64_t v = (c <= '9') ? c - '0' : c - 'a' + 10;
                l[3 - i / 16] |= v << (4 * (15 - i % 16));
            }
            return *Fp::from_canonical(l);
        };
        Fp2 x{dec("1800deef121f1e76426a00665e5c4479674322d4f75edadd46debd5cd992f6ed"),
              dec("198e9393920d483a7260bfb731fb5d25f1aa493335a9e71297e485b7aef312c2")};
        Fp2 y{dec("12c85ea5db8c6deb4aab71808dcb408fe3d1e7690c43d37b4ce6cc0166fa7daa"),
              dec("090689d0585ff075ec9e99ad690c3395bc4b313370b38ef355acdadcd122975b")};
        return G2Point::from_affine({x, y, false});
    }();
    return h;
}

bool g2_in_subgroup(const G2Point& q) { return q.mul(kR).is_identity(); }

std::array<std::uint8_t, 32> fp_to_bytes(const Fp& a) {
    std::array<std::uint8_t, 32> out{};
    limbs_to_be(a.to_canonical(), out.data());
    return out;
}

std::optional<Fp> fp_from_bytes(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 32) return std::nullopt;
    return Fp::from_canonical(limbs_from_be(bytes));
}

std::array<std::uint8_t, 32> g1_encode(const G1Point& p) {
    std::array<std::uint8_t, 32> out{};
    auto a = p.to_affine();
    if (a.infinity) {
        out[0] = kInfinityFlag;
        return out;
    }
    out = fp_to_bytes(a.x);
    if (a.y.is_odd()) out[0] |= kSignFlag;
    return out;
}

std::optional<G1Point> g1_decode(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 32) return std::nullopt;
    std::array<std::uint8_t, 32> buf;
    std::copy(bytes.begin(), bytes.end(), buf.begin());
    std::uint8_t flags = buf[0] & (kInfinityFlag | kSignFlag);
    buf[0] &= 0x3F;
    if (flags & kInfinityFlag) {
        if (flags != kInfinityFlag) return std::nullopt;
        if (std::any_of(buf.begin(), buf.end(), [](std::uint8_t b) { return b != 0; })) return std::nullopt;
        return G1Point::identity();
    }
    auto x = fp_from_bytes(buf);
    if (!x) return std::nullopt;
    auto y = (x->square() * *x + CurveParams<Fp>::b()).sqrt();
    if (!y) return std::nullopt;
    bool want_odd = flags & kSignFlag;
    if (y->is_odd() != want_odd) {
        *y = -*y;
        if (y->is_odd() != want_odd) return std::nullopt;
    }
    return G1Point::from_affine({*x, *y, false});
}

std::array<std::uint8_t, 64> g2_encode(const G2Point& p) {
    std::array<std::uint8_t, 64> out{};
    auto a = p.to_affine();
    if (a.infinity) {
        out[0] = kInfinityFlag;
        return out;
    }
    limbs_to_be(a.x.c1.to_canonical(), out.data());
    limbs_to_be(a.x.c0.to_canonical(), out.data() + 32);
    if (a.y.sign()) out[0] |= kSignFlag;
    return out;
}

std::optional<G2Point> g2_decode(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 64) return std::nullopt;
    std::array<std::uint8_t, 64> buf;
    std::copy(bytes.begin(), bytes.end(), buf.begin());
    std::uint8_t flags = buf[0] & (kInfinityFlag | kSignFlag);
    buf[0] &= 0x3F;
    if (flags & kInfinityFlag) {
        if (flags != kInfinityFlag) return std::nullopt;
        if (std::any_of(buf.begin(), buf.end(), [](std::uint8_t b) { return b != 0; })) return std::nullopt;
        return G2Point::identity();
    }
    auto c1 = fp_from_bytes(std::span(buf).subspan(0, 32));
    auto c0 = fp_from_bytes(std::span(buf).subspan(32, 32));
    if (!c0 || !c1) return std::nullopt;
    Fp2 x{*c0, *c1};
    auto y = (x.square() * x + CurveParams<Fp2>::b()).sqrt();
    if (!y) return std::nullopt;
    bool want = flags & kSignFlag;
    if (y->sign() != want) {
        *y = -*y;
        if (y->sign() != want) return std::nullopt;
    }
    G2Point q = G2Point::from_affine({x, *y, false});
    if (!g2_in_subgroup(q)) return std::nullopt;
    return q;
}

G1Point g1_from_seed(std::span<const std::uint8_t> seed) {
    // x = (hi * 2^256 + lo) mod p, then increment until x^3 + 3 is a square.
    Fp hi = reduce256(limbs_from_be(seed.subspan(0, 32)));
    Fp lo = reduce256(limbs_from_be(seed.subspan(32, 32)));
    // The Montgomery limbs of one are 2^256 mod p.
    Fp two256 = *Fp::from_canonical(Fp::one().v);
    Fp x = hi * two256 + lo;
    bool odd = seed[63] & 1;
    for (;;) {
        auto y = (x.square() * x + CurveParams<Fp>::b()).sqrt();
        if (y) {
            if (y->is_odd() != odd) *y = -*y;
            return G1Point::from_affine({x, *y, false});
        }
        x += Fp::one();
    }
}

std::array<std::uint8_t, 384> gt_encode(const Fp12& f) {
    std::array<std::uint8_t, 384> out{};
    auto c = f.w_coeffs();
    for (int k = 0; k < 6; ++k) {
        limbs_to_be(c[k].c0.to_canonical(), out.data() + 64 * k);
        limbs_to_be(c[k].c1.to_canonical(), out.data() + 64 * k + 32);
    }
    return out;
}

std::optional<Fp12> gt_decode(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 384) return std::nullopt;
    std::array<Fp2, 6> c;
    for (int k = 0; k < 6; ++k) {
        auto a = fp_from_bytes(bytes.subspan(64 * k, 32));
        auto b = fp_from_bytes(bytes.subspan(64 * k + 32, 32));
        if (!a || !b) return std::nullopt;
        c[k] = {*a, *b};
    }
    Fp12 f = Fp12::from_w_coeffs(c);
    if (f.is_zero() || !f.pow(kR).is_one()) return std::nullopt;
    return f;
}

}  // namespace zkfaith::bn254
