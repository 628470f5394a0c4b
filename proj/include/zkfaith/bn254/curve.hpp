#pragma once

// Short Weierstrass curves y^2 = x^3 + b in Jacobian coordinates.
//   G1: E(Fp),  b = 3
//   G2: E'(Fp2), b = 3 / xi  (D-type sextic twist)

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zkfaith/bn254/field.hpp"

namespace zkfaith::bn254 {

template <class F>
struct Affine {
    F x, y;
    bool infinity = true;
};

template <class F>
struct CurveParams;

template <>
struct CurveParams<Fp> {
    static const Fp& b();
};

template <>
struct CurveParams<Fp2> {
    static const Fp2& b();
};

template <class F>
struct Jacobian {
    F x = F::one(), y = F::one(), z = F::zero();

    static Jacobian identity() { return {}; }
    static Jacobian from_affine(const Affine<F>& a) {
        if (a.infinity) return identity();
        return {a.x, a.y, F::one()};
    }

    bool is_identity() const { return z.is_zero(); }

    Jacobian dbl() const {
        if (is_identity()) return *this;
        F a = x.square();
        F b = y.square();
        F c = b.square();
        F d = ((x + b).square() - a - c).dbl();
        F e = a.dbl() + a;
        F f = e.square();
        Jacobian r;
        r.x = f - d.dbl();
        F c8 = c.dbl().dbl().dbl();
        r.y = e * (d - r.x) - c8;
        r.z = (y * z).dbl();
        return r;
    }

    Jacobian operator+(const Jacobian& o) const {
        if (is_identity()) return o;
        if (o.is_identity()) return *this;
        F z1z1 = z.square();
        F z2z2 = o.z.square();
        F u1 = x * z2z2;
        F u2 = o.x * z1z1;
        F s1 = y * o.z * z2z2;
        F s2 = o.y * z * z1z1;
        F h = u2 - u1;
        F rr = (s2 - s1).dbl();
        if (h.is_zero()) {
            if (rr.is_zero()) return dbl();
            return identity();
        }
        F i = h.dbl().square();
        F j = h * i;
        F v = u1 * i;
        Jacobian r;
        r.x = rr.square() - j - v.dbl();
        r.y = rr * (v - r.x) - (s1 * j).dbl();
        r.z = ((z + o.z).square() - z1z1 - z2z2) * h;
        return r;
    }

    Jacobian operator-() const { return {x, -y, z}; }
    Jacobian operator-(const Jacobian& o) const { return *this + (-o); }

    // Scalar given as little-endian 64-bit limbs.
    Jacobian mul(std::span<const std::uint64_t> k) const {
        // 4-bit fixed window
        std::array<Jacobian, 16> table;
        table[0] = identity();
        for (int i = 1; i < 16; ++i) table[i] = table[i - 1] + *this;
        Jacobian acc = identity();
        for (std::size_t limb = k.size(); limb-- > 0;) {
            for (int nib = 15; nib >= 0; --nib) {
                acc = acc.dbl().dbl().dbl().dbl();
                unsigned w = (k[limb] >> (4 * nib)) & 0xF;
                if (w) acc = acc + table[w];
            }
        }
        return acc;
    }

    Affine<F> to_affine() const {
        if (is_identity()) return {};
        F zi = z.inverse();
        F zi2 = zi.square();
        return {x * zi2, y * zi2 * zi, false};
    }

    bool operator==(const Jacobian& o) const {
        if (is_identity() || o.is_identity()) return is_identity() == o.is_identity();
        F z1z1 = z.square();
        F z2z2 = o.z.square();
        if (x * z2z2 != o.x * z1z1) return false;
        return y * o.z * z2z2 == o.y * z * z1z1;
    }
};

template <class F>
bool on_curve(const Affine<F>& p) {
    if (p.infinity) return true;
    return p.y.square() == p.x.square() * p.x + CurveParams<F>::b();
}

using G1Point = Jacobian<Fp>;
using G2Point = Jacobian<Fp2>;
using G1Affine = Affine<Fp>;
using G2Affine = Affine<Fp2>;

const G1Point& g1_generator();
const G2Point& g2_generator();

// Group order r, little-endian limbs.
const Limbs& group_order();

// Subgroup membership for G2 ([r]Q == O). Every point of E(Fp) is in G1.
bool g2_in_subgroup(const G2Point& q);

// Compressed encodings. Top bit of the first byte flags infinity, the next
// bit carries the sign of y.
std::array<std::uint8_t, 32> g1_encode(const G1Point& p);
std::optional<G1Point> g1_decode(std::span<const std::uint8_t> bytes);
std::array<std::uint8_t, 64> g2_encode(const G2Point& p);
std::optional<G2Point> g2_decode(std::span<const std::uint8_t> bytes);

// Try-and-increment map from a 64-byte seed onto G1.
G1Point g1_from_seed(std::span<const std::uint8_t> seed);

// Line coefficients of the Miller loop for a fixed G2 point. Each entry is
// (slope, slope * x1 - y1); absent entries mark skipped vertical lines.
struct LineCoeffs {
    Fp2 slope, c3;
    bool present = false;
};

struct G2Prepared {
    std::vector<LineCoeffs> lines;
    bool infinity = true;
};

G2Prepared prepare_g2(const G2Point& q);

// Pairing.
Fp12 miller_loop(const G1Affine& p, const G2Affine& q);
Fp12 multi_miller_prepared(std::span<const G1Affine> ps, std::span<const G2Prepared* const> qs);
// Reference exponentiation by (p^12 - 1) / r using the generic hard part.
Fp12 final_exponentiation_reference(const Fp12& f);
Fp12 final_exponentiation(const Fp12& f);
Fp12 pairing(const G1Point& p, const G2Point& q);
Fp12 multi_pairing(std::span<const G1Point> ps, std::span<const G2Point> qs);

std::array<std::uint8_t, 384> gt_encode(const Fp12& f);
// Rejects non-canonical coordinates and elements outside the order-r subgroup.
std::optional<Fp12> gt_decode(std::span<const std::uint8_t> bytes);

// Big-endian 32-byte encodings of a canonical field element.
std::array<std::uint8_t, 32> fp_to_bytes(const Fp& a);
std::optional<Fp> fp_from_bytes(std::span<const std::uint8_t> bytes);

}  // namespace zkfaith::bn254
