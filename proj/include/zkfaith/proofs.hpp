#pragma once

// Fiat-Shamir sigma proofs. Proofs store commit messages and responses;
// verifiers recompute the challenge, so it is never serialized.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "zkfaith/cl.hpp"
#include "zkfaith/commitment.hpp"
#include "zkfaith/transcript.hpp"

namespace zkfaith {

// ---- knowledge of a commitment opening

struct ProofOfOpening {
    G1 T;
    std::vector<Scalar> s;  // s[0] answers for m0, s[i] for m_i

    Bytes encode() const;
    static ProofOfOpening decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

ProofOfOpening prove_opening(const VCParams& params, const Commitment& com, const AttributeVector& M,
                             const Opening& opening, std::span<const std::uint8_t> context, Rng& rng);
bool verify_opening(const VCParams& params, const Commitment& com, const ProofOfOpening& proof,
                    std::span<const std::uint8_t> context);

// Verification equation under an externally supplied challenge, and a
// simulator that produces accepting transcripts for a programmed challenge
// without any witness.
bool opening_equation_holds(const VCParams& params, const Commitment& com, const ProofOfOpening& proof,
                            const Scalar& challenge);
ProofOfOpening simulate_opening(const VCParams& params, const Commitment& com, const Scalar& challenge, Rng& rng);

// ---- range predicates

enum class RangeKind : std::uint8_t { at_least = 1, at_most = 2 };

struct RangePredicate {
    std::uint32_t position = 0;
    RangeKind kind = RangeKind::at_least;
    std::int64_t threshold = 0;
    std::uint32_t n_bits = 0;

    bool operator==(const RangePredicate&) const = default;
};

// Pedersen bases for value commitments, derived by hashing.
struct RangeBases {
    G1 G, H;
};
RangeBases range_bases(const PublicParams& pp);

// Commit messages and responses of one range statement. The response for
// the committed value itself belongs to the enclosing proof.
struct BitProof {
    G1 C;       // b*G + t*H
    G1 T0, T1;  // OR-proof commit messages
    Scalar c0;  // c1 = c - c0
    Scalar s0, s1;
};

struct RangeComponent {
    G1 C;    // value commitment v*G + t*H
    G1 T_C;  // link: k_v*G + k_t*H
    Scalar s_t;
    std::vector<BitProof> bits;
    G1 T_D;  // recomposition: D = delta*H
    Scalar s_D;
};

// Difference bounded by the predicate, or a typed refusal:
//   CannotSatisfyError  the predicate is false
//   CapacityError       true, but the difference needs more than n_bits
//                       (or 2^n_bits would reach q)
Scalar range_difference(const PublicParams& pp, const Scalar& value, RangeKind kind, std::int64_t threshold,
                        std::uint32_t n_bits);

// Two-phase prover for use inside a larger sigma protocol.
class RangeProver {
public:
    // blinding fixes the randomness of the value commitment; fresh otherwise.
    RangeProver(const PublicParams& pp, const RangePredicate& pred, const Scalar& value, const Scalar& k_value,
                Rng& rng, std::optional<Scalar> blinding = std::nullopt);
    void commit(Transcript& t) const;
    RangeComponent respond(const Scalar& c) const;
    const RangeComponent& partial() const { return comp_; }

private:
    PublicParams pp_;
    RangeBases bases_;
    RangePredicate pred_;
    RangeComponent comp_;
    Scalar t_, k_t_, u_D_, delta_;
    std::vector<Scalar> bit_t_, bit_u_, bit_csim_, bit_ssim_;
    std::vector<bool> bit_;
};

void absorb_range(Transcript& t, const RangeComponent& comp);
bool check_range(const PublicParams& pp, const RangePredicate& pred, const RangeComponent& comp,
                 const Scalar& s_value, const Scalar& c);

// Standalone range proof on a Pedersen commitment C = v*G + t*H.
struct RangeProof {
    RangeComponent comp;
    Scalar s_v;

    Bytes encode() const;
    static RangeProof decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

RangeProof prove_range(const PublicParams& pp, const Scalar& value, const Scalar& blinding, const RangePredicate& pred,
                       std::span<const std::uint8_t> context, Rng& rng);
// Commitment C travels inside the proof.
bool verify_range(const PublicParams& pp, const RangeProof& proof, const RangePredicate& pred,
                  std::span<const std::uint8_t> context);
G1 pedersen(const PublicParams& pp, const Scalar& value, const Scalar& blinding);

// ---- presentation: knowledge of a CL signature with selective disclosure

// Extra relation on a hidden attribute: target = m_position * base. The
// revocation tag equation is expressed this way.
struct AttributeLink {
    std::uint32_t position = 0;
    G1 base, target;
};

// Fresh commitment to the signed vector, proven to share the hidden
// attributes with the signature. Used when the presentation has to be tied
// to a follow-up proof about the same vector.
struct BoundCommitment {
    Commitment com;
    G1 T;
    Scalar s0;
};

struct PresentationProof {
    Signature sig;  // randomized
    GT T;
    Scalar s_rho, s_m0;
    std::vector<Scalar> s_hidden;  // ascending over the undisclosed positions
    std::vector<RangeComponent> ranges;
    std::vector<G1> link_T;
    std::optional<BoundCommitment> bound;

    Bytes encode() const;
    static PresentationProof decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

struct PresentationRequest {
    std::set<std::uint32_t> disclose;
    std::vector<RangePredicate> predicates;
    std::vector<AttributeLink> links;
    std::optional<Opening> bind;  // opening randomness for the bound commitment
};

// Throws RedundantPredicateError for a predicate on a disclosed position,
// CapacityError / CannotSatisfyError from range_difference, PositionError
// for positions outside 1..l.
PresentationProof prove_presentation(const IssuerPublicKey& pk, const Signature& sig, const AttributeVector& M,
                                     const Scalar& m0, const PresentationRequest& req,
                                     std::span<const std::uint8_t> context, Rng& rng);
// As above with the blinding scalars fixed (oracle tests).
PresentationProof prove_presentation_with(const IssuerPublicKey& pk, const RandomizedSignature& rs,
                                          const AttributeVector& M, const Scalar& m0, const PresentationRequest& req,
                                          std::span<const std::uint8_t> context, Rng& rng);

bool verify_presentation(const IssuerPublicKey& pk, const PresentationProof& proof,
                         const std::map<std::uint32_t, Scalar>& disclosed,
                         const std::vector<RangePredicate>& predicates, const std::vector<AttributeLink>& links,
                         std::span<const std::uint8_t> context);

// ---- update link: com and com' agree everywhere except position j, and
// com' holds value v at j

struct UpdateLinkProof {
    std::uint32_t j = 0;
    G1 T_old, T_new;
    Scalar s0_old, s0_new;
    std::vector<Scalar> s;  // one per position, s[j-1] only enters the old equation

    Bytes encode() const;
    static UpdateLinkProof decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

// Throws CannotSatisfyError when M and M' differ outside j.
UpdateLinkProof prove_update_link(const VCParams& params, const Commitment& com, const Commitment& com_new,
                                  const AttributeVector& M, const AttributeVector& M_new, const Opening& opening,
                                  const Opening& opening_new, std::size_t j, std::span<const std::uint8_t> context,
                                  Rng& rng);
bool verify_update_link(const VCParams& params, const Commitment& com, const Commitment& com_new, std::size_t j,
                        const Scalar& new_value, const UpdateLinkProof& proof, std::span<const std::uint8_t> context);

}  // namespace zkfaith
