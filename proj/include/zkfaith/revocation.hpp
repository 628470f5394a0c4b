#pragma once

// Revocation by per-epoch tags t = (s + e)^-1 * g. The issuer publishes the
// tags of revoked serials for each epoch; a holder shows the tag of its own
// serial plus a link proof that the hidden serial attribute opens it.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "zkfaith/proofs.hpp"

namespace zkfaith {

// Reserved attribute positions.
inline constexpr std::uint32_t kWidPosition = 1;
inline constexpr std::uint32_t kSerialPosition = 2;

G1 epoch_tag(const PublicParams& pp, const Scalar& serial, std::uint64_t epoch);
bool serial_degenerate(const Scalar& serial, std::uint64_t epoch);

// Public per-epoch list as loaded by verifiers.
struct EpochList {
    std::uint64_t epoch = 0;
    Bytes digest;          // registry digest after this epoch
    std::vector<G1> tags;  // sorted by canonical encoding

    bool contains(const G1& tag) const;
    Bytes encode() const;
    // Rejects unsorted or duplicate tags.
    static EpochList decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

class RevocationRegistry {
public:
    // Starts with epoch 0 published and empty.
    explicit RevocationRegistry(PublicParams pp);
    RevocationRegistry(const RevocationRegistry& o);
    RevocationRegistry& operator=(const RevocationRegistry& o);

    // False when the serial was already revoked (no-op).
    bool revoke(const Scalar& serial);
    bool is_revoked(const Scalar& serial) const;
    std::size_t revoked_count() const;

    // Advances the epoch and publishes tags for every revoked serial.
    std::shared_ptr<const EpochList> publish_epoch();

    std::uint64_t epoch() const;
    Bytes digest() const;
    std::shared_ptr<const EpochList> current() const;
    std::shared_ptr<const EpochList> published(std::uint64_t epoch) const;  // null if unknown

    // Recomputes every list and the digest chain from the stored history.
    bool history_consistent() const;

    const PublicParams& params() const { return pp_; }

    // Issuer-private state, serials included. IntegrityError on a broken chain.
    Bytes encode() const;
    static RevocationRegistry decode(const PublicParams& pp, std::span<const std::uint8_t> bytes);

private:
    PublicParams pp_;
    mutable std::mutex mu_;
    std::map<Bytes, Scalar> revoked_;  // keyed by encoding
    std::map<Bytes, std::uint64_t> revoked_at_;
    std::map<std::uint64_t, std::shared_ptr<const EpochList>> published_;
};

Bytes chain_digest(const Bytes& prev, std::uint64_t epoch, const std::vector<G1>& tags);

struct NonMembershipProof {
    std::uint64_t epoch = 0;
    G1 tag;

    Bytes encode() const;
    static NonMembershipProof decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

// DegenerateSerialError when s + e = 0.
NonMembershipProof prove_non_membership(const PublicParams& pp, const Scalar& serial, std::uint64_t epoch);

// Link for the presentation: serial * tag = g - e * tag.
AttributeLink non_membership_link(const PublicParams& pp, const NonMembershipProof& nm);

enum class RevocationStatus { ok, revoked, stale_epoch, forgery };
const char* to_string(RevocationStatus s);

// Checks freshness, the presentation with the tag link appended, then
// membership of the tag in the list.
RevocationStatus verify_non_membership(const IssuerPublicKey& pk, const PresentationProof& proof,
                                       const NonMembershipProof& nm, const EpochList& list,
                                       const std::map<std::uint32_t, Scalar>& disclosed,
                                       const std::vector<RangePredicate>& predicates,
                                       std::vector<AttributeLink> links, std::span<const std::uint8_t> context);

}  // namespace zkfaith
