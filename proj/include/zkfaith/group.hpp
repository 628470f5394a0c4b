#pragma once

// Bilinear group abstraction with two interchangeable backends:
//
//   curve  BN254 with the optimal ate pairing. The elements are real points.
//   mock   Every element is stored as its discrete log to the generator, so
//          e(a*g, b*h) = (a*b)*gt holds as exact integer arithmetic mod q.
//          Only for testing: it offers no security at all.
//
// G1 and G2 are written additively, GT multiplicatively.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "zkfaith/bn254/curve.hpp"
#include "zkfaith/bytes.hpp"
#include "zkfaith/rng.hpp"

namespace zkfaith {

enum class Backend : std::uint8_t { curve = 1, mock = 2 };
enum class SecurityLevel : std::uint8_t { toy = 1, standard = 2 };

std::string_view to_string(Backend b);
std::string_view to_string(SecurityLevel l);
Backend parse_backend(std::string_view s);       // ConfigError on unknown names
SecurityLevel parse_level(std::string_view s);   // ConfigError on unknown names

// One parameter set. Instances are interned and live for the whole process,
// so elements refer to them by pointer.
struct GroupContext {
    Backend backend;
    std::string id;  // "bn254" or "mock-<q>"
    mpz_class order;
    std::size_t scalar_width;  // bytes in the fixed-width scalar encoding
    unsigned security_bits;
};

const GroupContext& curve_context();
// Throws ConfigError when q is not prime.
const GroupContext& mock_context(const mpz_class& q);

class Scalar {
public:
    Scalar() = default;
    Scalar(const GroupContext& ctx, const mpz_class& v);

    static Scalar zero(const GroupContext& ctx) { return Scalar(ctx, 0); }
    static Scalar one(const GroupContext& ctx) { return Scalar(ctx, 1); }
    static Scalar from_int(const GroupContext& ctx, long long v);
    static Scalar random(const GroupContext& ctx, Rng& rng);
    static Scalar random_nonzero(const GroupContext& ctx, Rng& rng);
    // Fixed-width big-endian; rejects values >= q.
    static Scalar decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);

    const GroupContext& context() const;
    bool valid() const { return ctx_ != nullptr; }
    const mpz_class& value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    unsigned long to_ulong() const { return v_.get_ui(); }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    // Throws UsageError on zero.
    Scalar inverse() const;
    bool operator==(const Scalar& o) const;

    Bytes encode() const;
    bn254::Limbs limbs() const;
    std::string to_string() const { return v_.get_str(); }

private:
    const GroupContext* ctx_ = nullptr;
    mpz_class v_;
};

class G1 {
public:
    G1() = default;
    static G1 identity(const GroupContext& ctx);
    static G1 generator(const GroupContext& ctx);
    // Mock backend only: the element with the given discrete log.
    static G1 from_exponent(const Scalar& e);
    // Curve backend only.
    static G1 from_point(const GroupContext& ctx, const bn254::G1Point& pt);
    static G1 decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);

    const GroupContext& context() const;
    bool is_identity() const;
    // Mock backend only.
    std::optional<Scalar> exponent() const;

    G1 operator+(const G1& o) const;
    G1 operator-(const G1& o) const;
    G1 operator-() const;
    G1& operator+=(const G1& o) { return *this = *this + o; }
    G1& operator-=(const G1& o) { return *this = *this - o; }
    G1 operator*(const Scalar& k) const;
    bool operator==(const G1& o) const;

    Bytes encode() const;
    const bn254::G1Point& point() const { return pt_; }

private:
    friend G1 msm(std::span<const G1>, std::span<const Scalar>);
    const GroupContext* ctx_ = nullptr;
    mpz_class exp_;
    bn254::G1Point pt_;
};

inline G1 operator*(const Scalar& k, const G1& p) { return p * k; }

// Sum of points[i] * scalars[i]; both spans must be non-empty and equally long.
G1 msm(std::span<const G1> points, std::span<const Scalar> scalars);

class G2 {
public:
    G2() = default;
    static G2 identity(const GroupContext& ctx);
    static G2 generator(const GroupContext& ctx);
    static G2 from_exponent(const Scalar& e);
    static G2 decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);

    const GroupContext& context() const;
    bool is_identity() const;
    std::optional<Scalar> exponent() const;

    G2 operator+(const G2& o) const;
    G2 operator-(const G2& o) const;
    G2 operator-() const;
    G2 operator*(const Scalar& k) const;
    bool operator==(const G2& o) const;

    Bytes encode() const;
    const bn254::G2Point& point() const { return pt_; }
    // Miller-loop line coefficients, computed once per element.
    const bn254::G2Prepared& prepared() const;

private:
    struct Cache;
    G2(const GroupContext* ctx, mpz_class exp, const bn254::G2Point& pt);
    const GroupContext* ctx_ = nullptr;
    mpz_class exp_;
    bn254::G2Point pt_;
    std::shared_ptr<Cache> cache_;
};

inline G2 operator*(const Scalar& k, const G2& p) { return p * k; }

class GT {
public:
    GT() = default;
    static GT identity(const GroupContext& ctx);
    static GT from_exponent(const Scalar& e);
    static GT decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);

    const GroupContext& context() const;
    bool is_identity() const;
    std::optional<Scalar> exponent() const;

    GT operator*(const GT& o) const;
    GT& operator*=(const GT& o) { return *this = *this * o; }
    GT inverse() const;
    GT pow(const Scalar& k) const;
    bool operator==(const GT& o) const;

    Bytes encode() const;

private:
    friend GT pair(const G1&, const G2&);
    friend GT pair_product(std::span<const G1>, std::span<const G2>);
    const GroupContext* ctx_ = nullptr;
    mpz_class exp_;
    bn254::Fp12 f_ = bn254::Fp12::one();
};

GT pair(const G1& u, const G2& v);
// Product of pair(us[i], vs[i]) with a single final exponentiation.
GT pair_product(std::span<const G1> us, std::span<const G2> vs);
// True when the product of pairings is the identity of GT.
bool pairing_product_is_identity(std::span<const G1> us, std::span<const G2> vs);

// The homomorphism G2 -> G1 with psi(a*h) = a*g. It has no efficient
// realization on BN254, so only the mock backend provides it.
G1 psi(const G2& v);

struct PublicParams {
    const GroupContext* ctx = nullptr;
    SecurityLevel level = SecurityLevel::standard;
    G1 g;
    G2 h;
    GT gt;

    const GroupContext& group() const { return *ctx; }
    const mpz_class& q() const { return ctx->order; }
    Backend backend() const { return ctx->backend; }

    Bytes encode() const;
    static PublicParams decode(std::span<const std::uint8_t> bytes);
    std::array<std::uint8_t, 32> digest() const;
};

// Deterministic parameters. The curve backend supports only the standard
// level; the mock backend uses q = 101 (toy) or q = 2^127 - 1 (standard).
PublicParams setup(SecurityLevel level, Backend backend);
// Mock parameters over an arbitrary prime order, e.g. q = 1009.
PublicParams setup_mock(const mpz_class& q);

Scalar hash_to_scalar(const PublicParams& pp, std::string_view domain_tag, std::span<const Bytes> inputs);
// Nothing-up-my-sleeve base: never the identity.
G1 hash_to_g1(const PublicParams& pp, std::string_view domain_tag, std::span<const Bytes> inputs);

}  // namespace zkfaith
