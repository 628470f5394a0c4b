#pragma once

// Arithmetic over the BN254 base field and its extension tower
//   Fp2  = Fp[i]  / (i^2 + 1)
//   Fp6  = Fp2[v] / (v^3 - xi),  xi = 9 + i
//   Fp12 = Fp6[w] / (w^2 - v)
// Fp elements are kept in Montgomery form.

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace zkfaith::bn254 {

using Limbs = std::array<std::uint64_t, 4>;

struct Fp {
    Limbs v{};  // Montgomery form, fully reduced

    static Fp zero() { return Fp{}; }
    static Fp one();
    static Fp from_u64(std::uint64_t x);
    // Canonical little-endian limbs in [0, p). Returns nullopt when >= p.
    static std::optional<Fp> from_canonical(const Limbs& x);
    Limbs to_canonical() const;

    bool is_zero() const { return (v[0] | v[1] | v[2] | v[3]) == 0; }
    bool operator==(const Fp&) const = default;

    Fp operator+(const Fp& o) const;
    Fp operator-(const Fp& o) const;
    Fp operator-() const;
    Fp operator*(const Fp& o) const;
    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }
    Fp square() const { return *this * *this; }
    Fp dbl() const { return *this + *this; }
    Fp pow(std::span<const std::uint64_t> exp) const;
    Fp inverse() const;  // zero maps to zero
    std::optional<Fp> sqrt() const;
    // Parity of the canonical representative.
    bool is_odd() const { return to_canonical()[0] & 1; }
};

const Limbs& modulus();

struct Fp2 {
    Fp c0, c1;

    static Fp2 zero() { return {}; }
    static Fp2 one() { return {Fp::one(), Fp::zero()}; }
    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const Fp2&) const = default;

    Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
    Fp2 operator-() const { return {-c0, -c1}; }
    Fp2 operator*(const Fp2& o) const;
    Fp2 operator*(const Fp& s) const { return {c0 * s, c1 * s}; }
    Fp2& operator+=(const Fp2& o) { return *this = *this + o; }
    Fp2& operator-=(const Fp2& o) { return *this = *this - o; }
    Fp2& operator*=(const Fp2& o) { return *this = *this * o; }
    Fp2 square() const;
    Fp2 dbl() const { return *this + *this; }
    Fp2 conj() const { return {c0, -c1}; }
    Fp2 mul_by_xi() const;
    Fp2 inverse() const;
    Fp2 pow(std::span<const std::uint64_t> exp) const;
    std::optional<Fp2> sqrt() const;
    // Sign used for point compression: parity of c0, or of c1 when c0 is zero.
    bool sign() const { return c0.is_zero() ? c1.is_odd() : c0.is_odd(); }
};

struct Fp6 {
    Fp2 c0, c1, c2;

    static Fp6 zero() { return {}; }
    static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }
    bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
    bool operator==(const Fp6&) const = default;

    Fp6 operator+(const Fp6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
    Fp6 operator-(const Fp6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    Fp6 operator-() const { return {-c0, -c1, -c2}; }
    Fp6 operator*(const Fp6& o) const;
    Fp6 square() const { return *this * *this; }
    Fp6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }
    Fp6 inverse() const;
};

struct Fp12 {
    Fp6 c0, c1;

    static Fp12 zero() { return {}; }
    static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }
    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool is_one() const { return *this == one(); }
    bool operator==(const Fp12&) const = default;

    Fp12 operator*(const Fp12& o) const;
    Fp12& operator*=(const Fp12& o) { return *this = *this * o; }
    Fp12 square() const;
    Fp12 conj() const { return {c0, -c1}; }
    Fp12 inverse() const;
    Fp12 frobenius() const;  // x -> x^p
    Fp12 pow(std::span<const std::uint64_t> exp) const;

    // Coefficients over Fp2 in the basis 1, w, ..., w^5.
    std::array<Fp2, 6> w_coeffs() const;
    static Fp12 from_w_coeffs(const std::array<Fp2, 6>& c);
};

// xi^((p-1)/3) and xi^((p-1)/2), used by the twisted Frobenius on G2.
const Fp2& twist_frobenius_x();
const Fp2& twist_frobenius_y();

}  // namespace zkfaith::bn254
