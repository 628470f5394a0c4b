#pragma once

// CL signatures on committed attribute vectors. Signature elements live in
// G1; the public key elements X, Y, W_i live in G2 so that every check is a
// pairing equation and no G2 -> G1 map is needed.

#include <utility>
#include <vector>

#include "zkfaith/commitment.hpp"
#include "zkfaith/group.hpp"

namespace zkfaith {

struct IssuerSecretKey {
    Scalar x, y;
    std::vector<Scalar> z;

    Bytes encode() const;
    static IssuerSecretKey decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

struct IssuerPublicKey {
    PublicParams pp;
    G2 X, Y;
    std::vector<G1> Z;
    std::vector<G2> W;

    std::size_t l() const { return Z.size(); }
    VCParams vc() const { return VCParams::from_bases(pp, Z); }
    // hash_to_scalar over the canonical encoding; used as key identifier.
    Scalar fingerprint() const;
    // pair(Z_i, Y) = pair(g, W_i) for all i, and X, Y non-identity.
    bool well_formed() const;

    Bytes encode() const;
    static IssuerPublicKey decode(const PublicParams& pp, std::span<const std::uint8_t> bytes);
};

struct Signature {
    G1 a;
    std::vector<G1> A;
    G1 b;
    std::vector<G1> B;
    G1 c;

    bool operator==(const Signature&) const = default;
    Bytes encode() const;
    static Signature decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

// Blinded signature: a~ = r*a, A~ = r*A, b~ = r*b, B~ = r*B, c^ = r*r'*c.
// The blinding scalars never leave the prover.
struct RandomizedSignature {
    Signature sig;
    Scalar r, r_prime;
};

std::pair<IssuerSecretKey, IssuerPublicKey> cl_keygen(const PublicParams& pp, std::size_t l, Rng& rng);
// Test hook with fixed key scalars.
std::pair<IssuerSecretKey, IssuerPublicKey> cl_keygen_from(const PublicParams& pp, const Scalar& x, const Scalar& y,
                                                           const std::vector<Scalar>& z);

Signature cl_issue_on_commitment(const IssuerSecretKey& sk, const IssuerPublicKey& pk, const Commitment& com,
                                 Rng& rng);
Signature cl_issue_with_alpha(const IssuerSecretKey& sk, const IssuerPublicKey& pk, const Commitment& com,
                              const Scalar& alpha);

// Structural checks on (a, A, b, B): pair(a, W_i) = pair(A_i, Y),
// pair(a, Y) = pair(b, h), pair(A_i, Y) = pair(B_i, h); a non-identity.
bool cl_structure_ok(const IssuerPublicKey& pk, const Signature& sig);
bool cl_verify(const IssuerPublicKey& pk, const AttributeVector& M, const Scalar& m0, const Signature& sig);

RandomizedSignature cl_randomize(const Signature& sig, Rng& rng);
RandomizedSignature cl_randomize_with(const Signature& sig, const Scalar& r, const Scalar& r_prime);

}  // namespace zkfaith
