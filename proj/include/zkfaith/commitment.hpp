#pragma once

// Vector commitment com = m0*g + sum_i m_i*Z_i with positional opening proofs.
// Positions are 1-based throughout.

#include <cstddef>
#include <utility>
#include <vector>

#include "zkfaith/group.hpp"

namespace zkfaith {

using AttributeVector = std::vector<Scalar>;

struct VCParams {
    PublicParams pp;
    G1 g;
    std::vector<G1> Z;  // Z[0] is the base of position 1

    std::size_t l() const { return Z.size(); }
    const G1& base(std::size_t i) const;  // PositionError outside 1..l

    // Bases taken from an issuer key instead of hashed ones.
    static VCParams from_bases(const PublicParams& pp, std::vector<G1> Z);
};

struct Opening {
    Scalar m0;
};

struct Commitment {
    G1 c;
    std::uint32_t l = 0;

    bool operator==(const Commitment&) const = default;
    Bytes encode() const;
    static Commitment decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

// Proof that position i of com opens to a given value. The challenge is
// recomputed by the verifier and never stored.
struct PositionProof {
    std::uint32_t i = 0;
    G1 T;
    Scalar s0;
    std::vector<Scalar> s;  // responses for the other positions, ascending

    Bytes encode() const;
    static PositionProof decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

VCParams vc_setup(const PublicParams& pp, std::size_t l);

std::pair<Commitment, Opening> vc_commit(const VCParams& params, const AttributeVector& M, Rng& rng);
Commitment vc_commit_with(const VCParams& params, const AttributeVector& M, const Opening& opening);

// Changes position j from old_value to new_value and refreshes m0.
std::pair<Commitment, Opening> vc_update(const VCParams& params, const Commitment& com, const Scalar& old_value,
                                         const Scalar& new_value, std::size_t j, const Opening& opening, Rng& rng);
Commitment vc_update_with(const VCParams& params, const Commitment& com, const Scalar& old_value,
                          const Scalar& new_value, std::size_t j, const Opening& opening, const Opening& fresh);

PositionProof vc_open(const VCParams& params, const Commitment& com, const AttributeVector& M, const Opening& opening,
                      std::size_t i, Rng& rng);
bool vc_verify(const VCParams& params, const Commitment& com, const Scalar& m, std::size_t i,
               const PositionProof& proof);

// Length check shared by the modules that take attribute vectors.
void check_length(const VCParams& params, const AttributeVector& M);

}  // namespace zkfaith
