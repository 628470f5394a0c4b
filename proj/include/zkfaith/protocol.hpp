#pragma once

// Role state machines: authority (document check), wallet (claimant),
// issuer and verifier, plus the messages exchanged between them.
//
// Issuance runs in two rounds. The claimant commits to its attributes with
// the serial slot empty; the issuer answers with a fresh serial, the
// claimant moves it into the commitment and proves that nothing else
// changed, and only then does the issuer sign.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zkfaith/revocation.hpp"
#include "zkfaith/schema.hpp"

namespace zkfaith {

enum class Reason : std::uint8_t {
    auth_signature = 1,
    auth_verdict,
    auth_mismatch,
    bad_proof,
    schema_mismatch,
    unknown_session,
    malicious_issuer,
    replay,
    stale_epoch,
    coverage,
    forgery,
    revoked,
    policy,
    unknown_issuer,
};
const char* to_string(Reason r);

class ProtocolError : public Error {
public:
    ProtocolError(Reason r, const std::string& what) : Error(std::string(to_string(r)) + ": " + what), reason_(r) {}
    Reason reason() const { return reason_; }

private:
    Reason reason_;
};

// ---- authority

struct AuthorityKey {
    Bytes public_key;  // Ed25519, 32 bytes
    Bytes secret_key;  // 64 bytes

    static AuthorityKey generate(Rng& rng);
    Bytes encode() const;
    static AuthorityKey decode(std::span<const std::uint8_t> bytes);
    // The public half alone, for issuers.
    Bytes encode_public() const;
    static Bytes decode_public(std::span<const std::uint8_t> bytes);
};

struct AuthResponse {
    std::string wid;
    bool verdict = false;
    std::string schema_id;
    Bytes doc_digest;
    Bytes signature;

    Bytes signed_message() const;
    Bytes encode() const;
    static AuthResponse decode(std::span<const std::uint8_t> bytes);
};

// The authority keeps nothing: it validates and signs a verdict.
AuthResponse faith_auth(const AuthorityKey& key, const SchemaRegistry& schemas, const Document& doc,
                        std::int64_t today);
bool verify_auth(std::span<const std::uint8_t> authority_pk, const AuthResponse& r);

// ---- issuer public material: one CL key per schema

struct IssuerDirectory {
    PublicParams pp;
    Bytes authority_pk;
    std::map<std::string, IssuerPublicKey> keys;

    const IssuerPublicKey& key(std::string_view schema_id) const;  // ProtocolError(unknown_issuer)
    Bytes encode() const;
    static IssuerDirectory decode(const PublicParams& pp, std::span<const std::uint8_t> bytes);
};

// ---- messages

struct IssueQuery {
    Bytes session;
    std::string schema_id;
    std::string wid;
    Commitment com;
    ProofOfOpening pi_M;
    PositionProof pi_wid;  // position 1 holds the hash of wid

    Bytes encode() const;
    static IssueQuery decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

struct IssueRequest {
    AuthResponse auth;
    IssueQuery query;

    Bytes encode() const;
    static IssueRequest decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

struct SerialOffer {
    Bytes session;
    Scalar serial;

    Bytes encode() const;
    static SerialOffer decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

struct SerialCommit {
    Bytes session;
    Commitment com;
    UpdateLinkProof link;

    Bytes encode() const;
    static SerialCommit decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

struct IssueResponse {
    Bytes session;
    Signature sig;

    Bytes encode() const;
    static IssueResponse decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

// Possession of the old credential with the serial disclosed to the issuer,
// a fresh commitment to the same vector, and a link to the updated one.
struct UpdateRequest {
    Bytes session;
    std::string schema_id;
    Scalar old_serial;
    PresentationProof proof;
    Commitment com_new;
    std::uint32_t position = 0;
    Scalar value;
    UpdateLinkProof link;

    Bytes encode() const;
    static UpdateRequest decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

Bytes issue_context(const IssuerPublicKey& pk, const AuthResponse& r, const IssueQuery& q);
Bytes serial_context(const IssuerPublicKey& pk, std::span<const std::uint8_t> session, const Scalar& serial);
Bytes update_context(const IssuerPublicKey& pk, std::span<const std::uint8_t> session);

// ---- credential and criterion

struct Credential {
    std::string schema_id;
    Scalar issuer_fp;
    Signature sig;
    AttributeVector M;
    Opening m0;

    const Scalar& serial() const { return M.at(kSerialPosition - 1); }
    // Identifier: hash of the signature encoding.
    Bytes id() const;
    Bytes encode() const;
    static Credential decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

struct PredicateSpec {
    std::string field;
    RangeKind kind = RangeKind::at_least;
    std::int64_t threshold = 0;
    std::uint32_t n_bits = 16;
};

struct Criterion {
    std::string verifier_id;
    std::string schema_id;
    std::set<std::string> disclose;
    std::vector<PredicateSpec> predicates;

    // PolicyError for reserved names, SchemaError for unknown or
    // non-range fields.
    void check(const Schema& schema) const;
    std::set<std::uint32_t> disclosed_positions(const Schema& schema) const;
    std::vector<RangePredicate> range_predicates(const Schema& schema) const;

    // "at least `years` old on `reference`": birth date at most the
    // same calendar day `years` earlier.
    static PredicateSpec min_age(std::string field, int years, std::int64_t reference, std::uint32_t n_bits = 16);
    // {"verifier", "schema", "disclose": [...], "predicates": [{"field", "op": ">="|"<=", "value", "bits"}]}
    static Criterion from_json(std::string_view text);
};

struct Presentation {
    std::string schema_id;
    std::string verifier_id;
    Bytes nonce;
    std::map<std::uint32_t, Scalar> disclosed;
    std::vector<RangePredicate> predicates;
    NonMembershipProof nm;
    PresentationProof proof;

    Bytes encode() const;
    static Presentation decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes);
};

Bytes show_context(const std::string& schema_id, const std::string& verifier_id, std::span<const std::uint8_t> nonce,
                   std::uint64_t epoch);

// Refuses criteria that touch reserved positions (PolicyError) and
// unsatisfiable predicates (CannotSatisfyError, nothing emitted).
Presentation faith_show(const IssuerDirectory& dir, const Schema& schema, const Credential& cred, const Criterion& phi,
                        const EpochList& epoch, std::span<const std::uint8_t> nonce, Rng& rng);

// ---- wallet

struct PendingIssue {
    Bytes session;
    std::string schema_id;
    AttributeVector M;
    Opening opening;
    Commitment com;
    std::optional<Bytes> replaces;  // credential id being updated
    // filled once the serial offer arrives
    AttributeVector M_final;
    Opening opening_final;
    Commitment com_final;
    bool offered = false;
};

class Wallet {
public:
    Wallet(PublicParams pp, std::string wid);

    const std::string& wid() const { return wid_; }
    const PublicParams& params() const { return pp_; }
    const std::vector<Credential>& credentials() const { return creds_; }
    const std::map<Bytes, PendingIssue>& pending() const { return pending_; }

    // Position 1 always carries this wallet's id, whatever the document says.
    IssueQuery ask(const IssuerDirectory& dir, const Schema& schema, const Document& doc, const AuthResponse& auth,
                   Rng& rng);
    SerialCommit accept_offer(const IssuerDirectory& dir, const SerialOffer& offer, Rng& rng);
    // ProtocolError(malicious_issuer) when the signature does not verify on
    // the committed vector.
    const Credential& complete(const IssuerDirectory& dir, const IssueResponse& resp);

    // PolicyError for reserved fields.
    UpdateRequest begin_update(const IssuerDirectory& dir, const Schema& schema, const Bytes& cred_id,
                               std::string_view field, const FieldValue& value, Rng& rng);

    const Credential& credential(const Bytes& id) const;  // UsageError if absent

    Bytes encode() const;
    static Wallet decode(const PublicParams& pp, std::span<const std::uint8_t> bytes);

private:
    PublicParams pp_;
    std::string wid_;
    std::vector<Credential> creds_;
    std::map<Bytes, PendingIssue> pending_;
};

IssueQuery faith_ask(Wallet& w, const IssuerDirectory& dir, const Schema& schema, const Document& doc,
                     const AuthResponse& auth, Rng& rng);

// ---- issuer

struct IssuerKeyPair {
    IssuerSecretKey sk;
    IssuerPublicKey pk;
};

struct PendingSession {
    std::string schema_id;
    Commitment com;
    Scalar serial;
    std::optional<Scalar> revoke_on_finish;
};

class Issuer {
public:
    static Issuer create(const PublicParams& pp, const SchemaRegistry& schemas, Bytes authority_pk, Rng& rng);
    Issuer(const Issuer& o);

    IssuerDirectory directory() const;
    const IssuerKeyPair& keys(std::string_view schema_id) const;

    // Round one. Checks the authority verdict, wid binding and opening proof.
    SerialOffer begin_issue(const AuthResponse& auth, const IssueQuery& q, Rng& rng);
    SerialOffer begin_update(const UpdateRequest& req, Rng& rng);
    // Round two: verifies the serial link and signs.
    IssueResponse finish(const SerialCommit& sc, Rng& rng);

    bool revoke(const Scalar& serial);
    std::shared_ptr<const EpochList> publish_epoch();
    const RevocationRegistry& registry() const { return registry_; }
    std::uint64_t issued() const { return issued_; }
    std::size_t pending_count() const { return pending_.size(); }

    Bytes encode() const;
    static Issuer decode(const PublicParams& pp, std::span<const std::uint8_t> bytes);

private:
    explicit Issuer(const PublicParams& pp) : pp_(pp), registry_(pp) {}
    Scalar fresh_serial(Rng& rng) const;

    PublicParams pp_;
    Bytes authority_pk_;
    std::map<std::string, IssuerKeyPair, std::less<>> keys_;
    std::uint64_t issued_ = 0;
    std::map<Bytes, PendingSession> pending_;
    RevocationRegistry registry_;
    mutable std::mutex mu_;  // serial assignment and revocation
};

// Runs both issuance rounds in process.
const Credential& faith_issue(Issuer& issuer, Wallet& wallet, const AuthResponse& auth, const IssueQuery& q, Rng& rng);
// Full update: request, serial injection, re-issue; the old serial is revoked.
const Credential& faith_update(Issuer& issuer, Wallet& wallet, const Schema& schema, const Bytes& cred_id,
                               std::string_view field, const FieldValue& value, Rng& rng);

// ---- verifier

struct VerifyOutcome {
    bool accepted = false;
    std::optional<Reason> reason;
    std::string detail;
    std::map<std::string, Scalar> disclosed;  // by field name
};

class Verifier {
public:
    Verifier(IssuerDirectory dir, SchemaRegistry schemas, std::string id);
    Verifier(const Verifier& o);

    const std::string& id() const { return id_; }
    // Coverage, freshness, epoch, then the proofs. Accepted nonces are
    // remembered; presenting one again is a replay. So is the newest epoch
    // accepted at: an older list is stale from then on.
    VerifyOutcome verify(const Presentation& pres, const Criterion& phi, const EpochList& epoch);

    Bytes encode() const;
    static Verifier decode(IssuerDirectory dir, SchemaRegistry schemas, std::span<const std::uint8_t> bytes);

private:
    IssuerDirectory dir_;
    SchemaRegistry schemas_;
    std::string id_;
    std::set<Bytes> seen_;
    std::uint64_t newest_epoch_ = 0;
    mutable std::mutex mu_;
};

VerifyOutcome faith_verify_presentation(Verifier& v, const Presentation& pres, const Criterion& phi,
                                        const EpochList& epoch);

}  // namespace zkfaith
