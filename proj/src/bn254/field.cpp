#include "zkfaith/bn254/field.hpp"

namespace zkfaith::bn254 {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr Limbs kP = {0x3c208c16d87cfd47ULL, 0x97816a916871ca8dULL, 0xb85045b68181585dULL,
                      0x30644e72e131a029ULL};
// 2^256 mod p and 2^512 mod p
constexpr Limbs kR = {0xd35d438dc58f0d9dULL, 0x0a78eb28f5c70b3dULL, 0x666ea36f7879462cULL,
                      0x0e0a77c19a07df2fULL};
constexpr Limbs kR2 = {0xf32cfc5b538afa89ULL, 0xb5e71911d44501fbULL, 0x47ab1eff0a417ff6ULL,
                       0x06d89f71cab8351fULL};
// -p^{-1} mod 2^64
constexpr u64 kInv = 0x87d20782e4866389ULL;

inline bool geq(const Limbs& a, const Limbs& b) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return true;
}

inline u64 sub_with_borrow(Limbs& r, const Limbs& a, const Limbs& b) {
    u64 borrow = 0;
    for (int i = 0; i < 4; ++i) {
        u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
        r[i] = static_cast<u64>(d);
        borrow = static_cast<u64>(d >> 64) & 1;
    }
    return borrow;
}

inline u64 add_with_carry(Limbs& r, const Limbs& a, const Limbs& b) {
    u64 carry = 0;
    for (int i = 0; i < 4; ++i) {
        u128 s = static_cast<u128>(a[i]) + b[i] + carry;
        r[i] = static_cast<u64>(s);
        carry = static_cast<u64>(s >> 64);
    }
    return carry;
}

// CIOS Montgomery multiplication without the extra carry word; valid because
// the top limb of p is below 2^62.
Limbs mont_mul(const Limbs& a, const Limbs& b) {
    u64 t[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        u128 s = static_cast<u128>(a[0]) * b[i] + t[0];
        u64 carry_a = static_cast<u64>(s >> 64);
        t[0] = static_cast<u64>(s);
        u64 m = t[0] * kInv;
        s = static_cast<u128>(m) * kP[0] + t[0];
        u64 carry_c = static_cast<u64>(s >> 64);
        for (int j = 1; j < 4; ++j) {
            s = static_cast<u128>(a[j]) * b[i] + t[j] + carry_a;
            carry_a = static_cast<u64>(s >> 64);
            t[j] = static_cast<u64>(s);
            s = static_cast<u128>(m) * kP[j] + t[j] + carry_c;
            carry_c = static_cast<u64>(s >> 64);
            t[j - 1] = static_cast<u64>(s);
        }
        t[3] = carry_a + carry_c;
    }
    Limbs r = {t[0], t[1], t[2], t[3]};
    Limbs d;
    u64 borrow = sub_with_borrow(d, r, kP);
    return borrow ? r : d;
}

// Small big-integer helpers used to derive exponents from p.
Limbs sub_small(Limbs a, u64 x) {
    for (auto& limb : a) {
        u64 prev = limb;
        limb -= x;
        if (prev >= x) break;
        x = 1;
    }
    return a;
}

Limbs add_small(Limbs a, u64 x) {
    for (auto& limb : a) {
        u64 prev = limb;
        limb += x;
        if (limb >= prev) break;
        x = 1;
    }
    return a;
}

Limbs div_small(const Limbs& a, u64 d) {
    Limbs q{};
    u128 rem = 0;
    for (int i = 3; i >= 0; --i) {
        u128 cur = (rem << 64) | a[i];
        q[i] = static_cast<u64>(cur / d);
        rem = cur % d;
    }
    return q;
}

template <class F>
F pow_generic(const F& base, std::span<const u64> exp, F one) {
    F acc = one;
    bool started = false;
    for (std::size_t i = exp.size(); i-- > 0;) {
        for (int bit = 63; bit >= 0; --bit) {
            if (started) acc = acc.square();
            if ((exp[i] >> bit) & 1) {
                acc = started ? acc * base : base;
                started = true;
            }
        }
    }
    return acc;
}

const Limbs& exp_p_minus_2() {
    static const Limbs e = sub_small(kP, 2);
    return e;
}
const Limbs& exp_p_plus_1_over_4() {
    static const Limbs e = div_small(add_small(kP, 1), 4);
    return e;
}
const Limbs& exp_p_minus_3_over_4() {
    static const Limbs e = div_small(sub_small(kP, 3), 4);
    return e;
}
const Limbs& exp_p_minus_1_over_2() {
    static const Limbs e = div_small(sub_small(kP, 1), 2);
    return e;
}

const Fp2& xi() {
    static const Fp2 x{Fp::from_u64(9), Fp::one()};
    return x;
}

// gamma[k] = xi^(k(p-1)/6)
const std::array<Fp2, 6>& frobenius_gammas() {
    static const std::array<Fp2, 6> g = [] {
        std::array<Fp2, 6> out;
        Limbs e = div_small(sub_small(kP, 1), 6);
        Fp2 g1 = xi().pow(e);
        out[0] = Fp2::one();
        for (int k = 1; k < 6; ++k) out[k] = out[k - 1] * g1;
        return out;
    }();
    return g;
}

}  // namespace

const Limbs& modulus() { return kP; }

Fp Fp::one() { return Fp{kR}; }

Fp Fp::from_u64(std::uint64_t x) { return Fp{mont_mul(Limbs{x, 0, 0, 0}, kR2)}; }

std::optional<Fp> Fp::from_canonical(const Limbs& x) {
    if (geq(x, kP)) return std::nullopt;
    return Fp{mont_mul(x, kR2)};
}

Limbs Fp::to_canonical() const { return mont_mul(v, Limbs{1, 0, 0, 0}); }

Fp Fp::operator+(const Fp& o) const {
    Fp r;
    add_with_carry(r.v, v, o.v);
    Limbs d;
    if (!sub_with_borrow(d, r.v, kP)) r.v = d;
    return r;
}

Fp Fp::operator-(const Fp& o) const {
    Fp r;
    if (sub_with_borrow(r.v, v, o.v)) add_with_carry(r.v, r.v, kP);
    return r;
}

Fp Fp::operator-() const { return Fp{} - *this; }

Fp Fp::operator*(const Fp& o) const { return Fp{mont_mul(v, o.v)}; }

Fp Fp::pow(std::span<const std::uint64_t> exp) const { return pow_generic(*this, exp, Fp::one()); }

Fp Fp::inverse() const { return pow(exp_p_minus_2()); }

std::optional<Fp> Fp::sqrt() const {
    Fp r = pow(exp_p_plus_1_over_4());
    if (r.square() != *this) return std::nullopt;
    return r;
}

Fp2 Fp2::operator*(const Fp2& o) const {
    Fp t0 = c0 * o.c0;
    Fp t1 = c1 * o.c1;
    return {t0 - t1, (c0 + c1) * (o.c0 + o.c1) - t0 - t1};
}

Fp2 Fp2::square() const {
    Fp t = c0 * c1;
    return {(c0 + c1) * (c0 - c1), t.dbl()};
}

Fp2 Fp2::mul_by_xi() const {
    // (c0 + c1 i)(9 + i) = (9c0 - c1) + (c0 + 9c1) i
    Fp c0x8 = c0.dbl().dbl().dbl();
    Fp c1x8 = c1.dbl().dbl().dbl();
    return {c0x8 + c0 - c1, c1x8 + c1 + c0};
}

Fp2 Fp2::inverse() const {
    Fp t = (c0.square() + c1.square()).inverse();
    return {c0 * t, -(c1 * t)};
}

Fp2 Fp2::pow(std::span<const std::uint64_t> exp) const { return pow_generic(*this, exp, Fp2::one()); }

std::optional<Fp2> Fp2::sqrt() const {
    if (is_zero()) return Fp2::zero();
    Fp2 a1 = pow(exp_p_minus_3_over_4());
    Fp2 alpha = a1 * (a1 * *this);
    Fp2 a0 = alpha.conj() * alpha;
    Fp2 minus_one = -Fp2::one();
    if (a0 == minus_one) return std::nullopt;
    Fp2 x0 = a1 * *this;
    Fp2 x;
    if (alpha == minus_one) {
        x = Fp2{-x0.c1, x0.c0};  // i * x0
    } else {
        x = (Fp2::one() + alpha).pow(exp_p_minus_1_over_2()) * x0;
    }
    if (x.square() != *this) return std::nullopt;
    return x;
}

Fp6 Fp6::operator*(const Fp6& o) const {
    Fp2 t0 = c0 * o.c0;
    Fp2 t1 = c1 * o.c1;
    Fp2 t2 = c2 * o.c2;
    Fp2 r0 = ((c1 + c2) * (o.c1 + o.c2) - t1 - t2).mul_by_xi() + t0;
    Fp2 r1 = (c0 + c1) * (o.c0 + o.c1) - t0 - t1 + t2.mul_by_xi();
    Fp2 r2 = (c0 + c2) * (o.c0 + o.c2) - t0 - t2 + t1;
    return {r0, r1, r2};
}

Fp6 Fp6::inverse() const {
    Fp2 a = c0.square() - (c1 * c2).mul_by_xi();
    Fp2 b = c2.square().mul_by_xi() - c0 * c1;
    Fp2 c = c1.square() - c0 * c2;
    Fp2 f = c0 * a + (c2 * b + c1 * c).mul_by_xi();
    Fp2 fi = f.inverse();
    return {a * fi, b * fi, c * fi};
}

Fp12 Fp12::operator*(const Fp12& o) const {
    Fp6 t0 = c0 * o.c0;
    Fp6 t1 = c1 * o.c1;
    return {t0 + t1.mul_by_v(), (c0 + c1) * (o.c0 + o.c1) - t0 - t1};
}

Fp12 Fp12::square() const {
    Fp6 t = c0 * c1;
    Fp6 r0 = (c0 + c1) * (c0 + c1.mul_by_v()) - t - t.mul_by_v();
    return {r0, t + t};
}

Fp12 Fp12::inverse() const {
    Fp6 t = (c0.square() - c1.square().mul_by_v()).inverse();
    return {c0 * t, -(c1 * t)};
}

std::array<Fp2, 6> Fp12::w_coeffs() const { return {c0.c0, c1.c0, c0.c1, c1.c1, c0.c2, c1.c2}; }

Fp12 Fp12::from_w_coeffs(const std::array<Fp2, 6>& c) {
    return {Fp6{c[0], c[2], c[4]}, Fp6{c[1], c[3], c[5]}};
}

Fp12 Fp12::frobenius() const {
    const auto& gamma = frobenius_gammas();
    auto c = w_coeffs();
    for (int k = 0; k < 6; ++k) c[k] = c[k].conj() * gamma[k];
    return from_w_coeffs(c);
}

Fp12 Fp12::pow(std::span<const std::uint64_t> exp) const { return pow_generic(*this, exp, Fp12::one()); }

const Fp2& twist_frobenius_x() { return frobenius_gammas()[2]; }
const Fp2& twist_frobenius_y() { return frobenius_gammas()[3]; }

}  // namespace zkfaith::bn254
