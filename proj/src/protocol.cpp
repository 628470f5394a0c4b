#include "zkfaith/protocol.hpp"

#include <sodium.h>

#include <algorithm>

#include <json.hpp>

#include "zkfaith/codec.hpp"
#include "zkfaith/hash.hpp"

namespace zkfaith {

namespace {

constexpr std::uint8_t kTagAuthorityKey = 0x50;
constexpr std::uint8_t kTagAuthResponse = 0x51;
constexpr std::uint8_t kTagDirectory = 0x52;
constexpr std::uint8_t kTagIssueQuery = 0x53;
constexpr std::uint8_t kTagIssueRequest = 0x54;
constexpr std::uint8_t kTagSerialOffer = 0x55;
constexpr std::uint8_t kTagSerialCommit = 0x56;
constexpr std::uint8_t kTagIssueResponse = 0x57;
constexpr std::uint8_t kTagUpdateRequest = 0x58;
constexpr std::uint8_t kTagCredential = 0x59;
constexpr std::uint8_t kTagPresentation = 0x5A;
constexpr std::uint8_t kTagWallet = 0x5B;
constexpr std::uint8_t kTagIssuer = 0x5C;
constexpr std::uint8_t kTagVerifier = 0x5D;
constexpr std::uint8_t kTagAuthorityPublic = 0x5E;
constexpr std::uint8_t kVersion = 1;

constexpr std::size_t kSessionBytes = 16;
// Serials are drawn so that s + e stays nonzero for this many epochs ahead.
constexpr std::uint64_t kSerialWindow = 1024;

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) throw Error("libsodium failed to initialise");
}

Bytes random_bytes(Rng& rng, std::size_t n) {
    Bytes b(n);
    rng.fill(b);
    return b;
}

Bytes u64_bytes(std::uint64_t v) {
    ByteWriter w;
    w.u64(v);
    return w.take();
}

Bytes pp_digest(const PublicParams& pp) {
    auto d = pp.digest();
    return Bytes(d.begin(), d.end());
}

void expect_pp(ByteReader& r, const PublicParams& pp) {
    std::size_t at = r.offset();
    if (r.bytes() != pp_digest(pp)) throw DecodeError("state bound to other public parameters", at);
}

bool get_bool(ByteReader& r) {
    std::size_t at = r.offset();
    auto v = r.u8();
    if (v > 1) throw DecodeError("bad boolean", at);
    return v == 1;
}

Bytes get_session(ByteReader& r) {
    std::size_t at = r.offset();
    Bytes s = r.bytes();
    if (s.size() != kSessionBytes) throw DecodeError("bad session id", at);
    return s;
}

void put_disclosed(ByteWriter& w, const std::map<std::uint32_t, Scalar>& d) {
    w.u32(static_cast<std::uint32_t>(d.size()));
    for (const auto& [pos, v] : d) {
        w.u32(pos);
        put(w, v);
    }
}

std::map<std::uint32_t, Scalar> get_disclosed(ByteReader& r, const GroupContext& ctx) {
    std::map<std::uint32_t, Scalar> out;
    std::uint32_t n = r.count(8);
    std::uint32_t last = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::size_t at = r.offset();
        std::uint32_t pos = r.u32();
        if (pos <= last) throw DecodeError("disclosed positions not ascending", at);
        last = pos;
        out.emplace(pos, get_scalar(r, ctx));
    }
    return out;
}

void put_predicate(ByteWriter& w, const RangePredicate& p) {
    w.u32(p.position).u8(static_cast<std::uint8_t>(p.kind)).u64(static_cast<std::uint64_t>(p.threshold)).u32(p.n_bits);
}

RangePredicate get_predicate(ByteReader& r) {
    RangePredicate p;
    p.position = r.u32();
    std::size_t at = r.offset();
    auto k = r.u8();
    if (k != 1 && k != 2) throw DecodeError("bad predicate kind", at);
    p.kind = static_cast<RangeKind>(k);
    p.threshold = static_cast<std::int64_t>(r.u64());
    p.n_bits = r.u32();
    return p;
}

bool is_reserved(std::string_view name) { return name == "wid" || name == "serial"; }

}  // namespace

const char* to_string(Reason r) {
    switch (r) {
        case Reason::auth_signature: return "auth-signature";
        case Reason::auth_verdict: return "auth-verdict";
        case Reason::auth_mismatch: return "auth-mismatch";
        case Reason::bad_proof: return "bad-proof";
        case Reason::schema_mismatch: return "schema-mismatch";
        case Reason::unknown_session: return "unknown-session";
        case Reason::malicious_issuer: return "malicious-issuer";
        case Reason::replay: return "replay";
        case Reason::stale_epoch: return "stale-epoch";
        case Reason::coverage: return "coverage";
        case Reason::forgery: return "forgery";
        case Reason::revoked: return "revoked";
        case Reason::policy: return "policy";
        case Reason::unknown_issuer: return "unknown-issuer";
    }
    return "?";
}

// ---- authority

AuthorityKey AuthorityKey::generate(Rng& rng) {
    ensure_sodium();
    Bytes seed = random_bytes(rng, crypto_sign_SEEDBYTES);
    AuthorityKey k;
    k.public_key.resize(crypto_sign_PUBLICKEYBYTES);
    k.secret_key.resize(crypto_sign_SECRETKEYBYTES);
    crypto_sign_seed_keypair(k.public_key.data(), k.secret_key.data(), seed.data());
    sodium_memzero(seed.data(), seed.size());
    return k;
}

Bytes AuthorityKey::encode() const {
    ByteWriter w;
    put_header(w, kTagAuthorityKey, kVersion);
    w.bytes(public_key).bytes(secret_key);
    return w.take();
}

AuthorityKey AuthorityKey::decode(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagAuthorityKey, kVersion);
    AuthorityKey k;
    k.public_key = r.bytes();
    k.secret_key = r.bytes();
    r.expect_end();
    if (k.public_key.size() != crypto_sign_PUBLICKEYBYTES || k.secret_key.size() != crypto_sign_SECRETKEYBYTES) {
        throw DecodeError("bad authority key length", 2);
    }
    return k;
}

Bytes AuthorityKey::encode_public() const {
    ByteWriter w;
    put_header(w, kTagAuthorityPublic, kVersion);
    w.bytes(public_key);
    return w.take();
}

Bytes AuthorityKey::decode_public(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagAuthorityPublic, kVersion);
    Bytes pk = r.bytes();
    r.expect_end();
    if (pk.size() != crypto_sign_PUBLICKEYBYTES) throw DecodeError("bad authority public key length", 2);
    return pk;
}

Bytes AuthResponse::signed_message() const {
    std::vector<Bytes> parts{to_bytes(wid), Bytes{static_cast<std::uint8_t>(verdict)}, to_bytes(schema_id), doc_digest};
    return encode_parts("zkfaith/auth-response", parts);
}

Bytes AuthResponse::encode() const {
    ByteWriter w;
    put_header(w, kTagAuthResponse, kVersion);
    w.str(wid).u8(verdict ? 1 : 0).str(schema_id).bytes(doc_digest).bytes(signature);
    return w.take();
}

AuthResponse AuthResponse::decode(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagAuthResponse, kVersion);
    AuthResponse a;
    a.wid = r.str();
    a.verdict = get_bool(r);
    a.schema_id = r.str();
    a.doc_digest = r.bytes();
    std::size_t at = r.offset();
    a.signature = r.bytes();
    if (a.signature.size() != crypto_sign_BYTES) throw DecodeError("bad signature length", at);
    r.expect_end();
    return a;
}

AuthResponse faith_auth(const AuthorityKey& key, const SchemaRegistry& schemas, const Document& doc,
                        std::int64_t today) {
    ensure_sodium();
    AuthResponse r;
    r.wid = doc.wid;
    r.schema_id = doc.schema_id;
    r.doc_digest = doc.digest();
    r.verdict = schemas.contains(doc.schema_id) && validate(doc, schemas.get(doc.schema_id), today).ok;
    Bytes m = r.signed_message();
    r.signature.resize(crypto_sign_BYTES);
    crypto_sign_detached(r.signature.data(), nullptr, m.data(), m.size(), key.secret_key.data());
    return r;
}

bool verify_auth(std::span<const std::uint8_t> authority_pk, const AuthResponse& r) {
    ensure_sodium();
    if (authority_pk.size() != crypto_sign_PUBLICKEYBYTES || r.signature.size() != crypto_sign_BYTES) return false;
    Bytes m = r.signed_message();
    return crypto_sign_verify_detached(r.signature.data(), m.data(), m.size(), authority_pk.data()) == 0;
}

// ---- directory

const IssuerPublicKey& IssuerDirectory::key(std::string_view schema_id) const {
    auto it = keys.find(std::string(schema_id));
    if (it == keys.end()) throw ProtocolError(Reason::unknown_issuer, "no issuer key for '" + std::string(schema_id) + "'");
    return it->second;
}

Bytes IssuerDirectory::encode() const {
    ByteWriter w;
    put_header(w, kTagDirectory, kVersion);
    w.bytes(pp_digest(pp)).bytes(authority_pk).u32(static_cast<std::uint32_t>(keys.size()));
    for (const auto& [id, pk] : keys) w.str(id).bytes(pk.encode());
    return w.take();
}

IssuerDirectory IssuerDirectory::decode(const PublicParams& pp, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagDirectory, kVersion);
    expect_pp(r, pp);
    IssuerDirectory d{pp, r.bytes(), {}};
    std::uint32_t n = r.count(8);
    AscendingKeys<std::string> order("schema keys");
    for (std::uint32_t i = 0; i < n; ++i) {
        std::size_t at = r.offset();
        auto id = r.str();
        order.next(id, at);
        at = r.offset();
        auto pk = IssuerPublicKey::decode(pp, r.bytes());
        if (!pk.well_formed()) throw DecodeError("malformed issuer key", at);
        if (!d.keys.emplace(id, std::move(pk)).second) throw DecodeError("duplicate schema key", at);
    }
    r.expect_end();
    return d;
}

// ---- messages

Bytes IssueQuery::encode() const {
    ByteWriter w;
    put_header(w, kTagIssueQuery, kVersion);
    w.bytes(session).str(schema_id).str(wid).bytes(com.encode()).bytes(pi_M.encode()).bytes(pi_wid.encode());
    return w.take();
}

IssueQuery IssueQuery::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagIssueQuery, kVersion);
    IssueQuery q;
    q.session = get_session(r);
    q.schema_id = r.str();
    q.wid = r.str();
    q.com = Commitment::decode(ctx, r.bytes());
    q.pi_M = ProofOfOpening::decode(ctx, r.bytes());
    q.pi_wid = PositionProof::decode(ctx, r.bytes());
    r.expect_end();
    return q;
}

Bytes IssueRequest::encode() const {
    ByteWriter w;
    put_header(w, kTagIssueRequest, kVersion);
    w.bytes(auth.encode()).bytes(query.encode());
    return w.take();
}

IssueRequest IssueRequest::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagIssueRequest, kVersion);
    IssueRequest q;
    q.auth = AuthResponse::decode(r.bytes());
    q.query = IssueQuery::decode(ctx, r.bytes());
    r.expect_end();
    return q;
}

Bytes SerialOffer::encode() const {
    ByteWriter w;
    put_header(w, kTagSerialOffer, kVersion);
    w.bytes(session);
    put(w, serial);
    return w.take();
}

SerialOffer SerialOffer::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagSerialOffer, kVersion);
    SerialOffer o;
    o.session = get_session(r);
    o.serial = get_scalar(r, ctx);
    r.expect_end();
    return o;
}

Bytes SerialCommit::encode() const {
    ByteWriter w;
    put_header(w, kTagSerialCommit, kVersion);
    w.bytes(session).bytes(com.encode()).bytes(link.encode());
    return w.take();
}

SerialCommit SerialCommit::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagSerialCommit, kVersion);
    SerialCommit s;
    s.session = get_session(r);
    s.com = Commitment::decode(ctx, r.bytes());
    s.link = UpdateLinkProof::decode(ctx, r.bytes());
    r.expect_end();
    return s;
}

Bytes IssueResponse::encode() const {
    ByteWriter w;
    put_header(w, kTagIssueResponse, kVersion);
    w.bytes(session).bytes(sig.encode());
    return w.take();
}

IssueResponse IssueResponse::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagIssueResponse, kVersion);
    IssueResponse s;
    s.session = get_session(r);
    s.sig = Signature::decode(ctx, r.bytes());
    r.expect_end();
    return s;
}

Bytes UpdateRequest::encode() const {
    ByteWriter w;
    put_header(w, kTagUpdateRequest, kVersion);
    w.bytes(session).str(schema_id);
    put(w, old_serial);
    w.bytes(proof.encode()).bytes(com_new.encode()).u32(position);
    put(w, value);
    w.bytes(link.encode());
    return w.take();
}

UpdateRequest UpdateRequest::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagUpdateRequest, kVersion);
    UpdateRequest u;
    u.session = get_session(r);
    u.schema_id = r.str();
    u.old_serial = get_scalar(r, ctx);
    u.proof = PresentationProof::decode(ctx, r.bytes());
    u.com_new = Commitment::decode(ctx, r.bytes());
    u.position = r.u32();
    u.value = get_scalar(r, ctx);
    u.link = UpdateLinkProof::decode(ctx, r.bytes());
    r.expect_end();
    return u;
}

Bytes issue_context(const IssuerPublicKey& pk, const AuthResponse& r, const IssueQuery& q) {
    std::vector<Bytes> parts{pk.fingerprint().encode(), r.encode(), q.session, to_bytes(q.schema_id), to_bytes(q.wid)};
    return encode_parts("zkfaith/issue", parts);
}

Bytes serial_context(const IssuerPublicKey& pk, std::span<const std::uint8_t> session, const Scalar& serial) {
    std::vector<Bytes> parts{pk.fingerprint().encode(), Bytes(session.begin(), session.end()), serial.encode()};
    return encode_parts("zkfaith/issue/serial", parts);
}

Bytes update_context(const IssuerPublicKey& pk, std::span<const std::uint8_t> session) {
    std::vector<Bytes> parts{pk.fingerprint().encode(), Bytes(session.begin(), session.end())};
    return encode_parts("zkfaith/update", parts);
}

// ---- credential

Bytes Credential::id() const {
    auto d = sha256(sig.encode());
    return Bytes(d.begin(), d.end());
}

Bytes Credential::encode() const {
    ByteWriter w;
    put_header(w, kTagCredential, kVersion);
    w.str(schema_id);
    put(w, issuer_fp);
    w.bytes(sig.encode());
    put_vec(w, M);
    put(w, m0.m0);
    return w.take();
}

Credential Credential::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagCredential, kVersion);
    Credential c;
    c.schema_id = r.str();
    c.issuer_fp = get_scalar(r, ctx);
    c.sig = Signature::decode(ctx, r.bytes());
    std::size_t at = r.offset();
    c.M = get_scalars(r, ctx);
    if (c.M.size() < kSerialPosition || c.M.size() != c.sig.A.size()) throw DecodeError("attribute count", at);
    c.m0 = Opening{get_scalar(r, ctx)};
    r.expect_end();
    return c;
}

// ---- criterion

void Criterion::check(const Schema& schema) const {
    if (schema_id != schema.id) throw SchemaError("criterion is for '" + schema_id + "', not '" + schema.id + "'");
    for (const auto& name : disclose) {
        if (is_reserved(name)) throw PolicyError("field '" + name + "' is reserved and cannot be disclosed");
        schema.position(name);
    }
    for (const auto& p : predicates) {
        if (is_reserved(p.field)) throw PolicyError("field '" + p.field + "' is reserved");
        if (!schema.field(p.field).range) throw SchemaError("field '" + p.field + "' is not range-capable");
    }
}

std::set<std::uint32_t> Criterion::disclosed_positions(const Schema& schema) const {
    std::set<std::uint32_t> out;
    for (const auto& name : disclose) out.insert(schema.position(name));
    return out;
}

std::vector<RangePredicate> Criterion::range_predicates(const Schema& schema) const {
    std::vector<RangePredicate> out;
    for (const auto& p : predicates) out.push_back({schema.position(p.field), p.kind, p.threshold, p.n_bits});
    return out;
}

PredicateSpec Criterion::min_age(std::string field, int years, std::int64_t reference, std::uint32_t n_bits) {
    return {std::move(field), RangeKind::at_most, years_before(reference, years), n_bits};
}

Criterion Criterion::from_json(std::string_view text) {
    using json = nlohmann::json;
    Criterion c;
    try {
        json j = json::parse(text);
        c.verifier_id = j.at("verifier").get<std::string>();
        c.schema_id = j.at("schema").get<std::string>();
        for (const auto& d : j.value("disclose", json::array())) c.disclose.insert(d.get<std::string>());
        for (const auto& p : j.value("predicates", json::array())) {
            PredicateSpec s;
            s.field = p.at("field").get<std::string>();
            s.n_bits = p.value("bits", 16u);
            auto value_of = [](const json& v) {
                return v.is_string() ? parse_date(v.get<std::string>()) : v.get<std::int64_t>();
            };
            if (p.contains("min_age")) {
                s = min_age(s.field, p["min_age"].get<int>(), value_of(p.at("on")), s.n_bits);
            } else {
                auto op = p.at("op").get<std::string>();
                if (op == ">=") s.kind = RangeKind::at_least;
                else if (op == "<=") s.kind = RangeKind::at_most;
                else throw SchemaError("unknown predicate operator '" + op + "'");
                s.threshold = value_of(p.at("value"));
            }
            c.predicates.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed criterion: ") + e.what());
    }
    return c;
}

// ---- presentation

Bytes Presentation::encode() const {
    ByteWriter w;
    put_header(w, kTagPresentation, kVersion);
    w.str(schema_id).str(verifier_id).bytes(nonce);
    put_disclosed(w, disclosed);
    w.u32(static_cast<std::uint32_t>(predicates.size()));
    for (const auto& p : predicates) put_predicate(w, p);
    w.bytes(nm.encode()).bytes(proof.encode());
    return w.take();
}

Presentation Presentation::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagPresentation, kVersion);
    Presentation p;
    p.schema_id = r.str();
    p.verifier_id = r.str();
    p.nonce = r.bytes();
    p.disclosed = get_disclosed(r, ctx);
    std::uint32_t n = r.count(17);
    for (std::uint32_t i = 0; i < n; ++i) p.predicates.push_back(get_predicate(r));
    p.nm = NonMembershipProof::decode(ctx, r.bytes());
    p.proof = PresentationProof::decode(ctx, r.bytes());
    r.expect_end();
    return p;
}

Bytes show_context(const std::string& schema_id, const std::string& verifier_id, std::span<const std::uint8_t> nonce,
                   std::uint64_t epoch) {
    std::vector<Bytes> parts{to_bytes(schema_id), to_bytes(verifier_id), Bytes(nonce.begin(), nonce.end()),
                             u64_bytes(epoch)};
    return encode_parts("zkfaith/show", parts);
}

Presentation faith_show(const IssuerDirectory& dir, const Schema& schema, const Credential& cred,
                        const Criterion& phi, const EpochList& epoch, std::span<const std::uint8_t> nonce, Rng& rng) {
    if (cred.schema_id != schema.id) throw SchemaError("credential is not a '" + schema.id + "'");
    phi.check(schema);
    const auto& pk = dir.key(schema.id);
    if (pk.fingerprint() != cred.issuer_fp) throw ProtocolError(Reason::unknown_issuer, "credential from another issuer key");

    Presentation p;
    p.schema_id = schema.id;
    p.verifier_id = phi.verifier_id;
    p.nonce.assign(nonce.begin(), nonce.end());
    p.nm = prove_non_membership(dir.pp, cred.serial(), epoch.epoch);

    PresentationRequest req;
    req.disclose = phi.disclosed_positions(schema);
    req.predicates = phi.range_predicates(schema);
    req.links = {non_membership_link(dir.pp, p.nm)};
    auto ctx = show_context(p.schema_id, p.verifier_id, p.nonce, epoch.epoch);
    p.proof = prove_presentation(pk, cred.sig, cred.M, cred.m0.m0, req, ctx, rng);
    for (auto pos : req.disclose) p.disclosed.emplace(pos, cred.M[pos - 1]);
    p.predicates = req.predicates;
    return p;
}

// ---- wallet

Wallet::Wallet(PublicParams pp, std::string wid) : pp_(std::move(pp)), wid_(std::move(wid)) {
    if (wid_.empty()) throw UsageError("empty wallet id");
}

const Credential& Wallet::credential(const Bytes& id) const {
    for (const auto& c : creds_) {
        if (c.id() == id) return c;
    }
    throw UsageError("no such credential in wallet");
}

IssueQuery Wallet::ask(const IssuerDirectory& dir, const Schema& schema, const Document& doc,
                       const AuthResponse& auth, Rng& rng) {
    const auto& pk = dir.key(schema.id);
    AttributeVector M = encode_attributes(pp_, doc, schema);
    M[kWidPosition - 1] = wid_scalar(pp_, wid_);
    if (M.size() != pk.l()) throw SchemaError("issuer key length does not match schema");
    auto vc = pk.vc();

    IssueQuery q;
    q.session = random_bytes(rng, kSessionBytes);
    q.schema_id = schema.id;
    q.wid = wid_;
    auto [com, o] = vc_commit(vc, M, rng);
    q.com = com;
    q.pi_M = prove_opening(vc, com, M, o, issue_context(pk, auth, q), rng);
    q.pi_wid = vc_open(vc, com, M, o, kWidPosition, rng);

    PendingIssue p;
    p.session = q.session;
    p.schema_id = schema.id;
    p.M = std::move(M);
    p.opening = o;
    p.com = com;
    pending_.insert_or_assign(q.session, std::move(p));
    return q;
}

SerialCommit Wallet::accept_offer(const IssuerDirectory& dir, const SerialOffer& offer, Rng& rng) {
    auto it = pending_.find(offer.session);
    if (it == pending_.end()) throw ProtocolError(Reason::unknown_session, "no pending request for this offer");
    PendingIssue& p = it->second;
    const auto& pk = dir.key(p.schema_id);
    auto vc = pk.vc();
    p.M_final = p.M;
    p.M_final[kSerialPosition - 1] = offer.serial;
    auto [com, o] = vc_update(vc, p.com, p.M[kSerialPosition - 1], offer.serial, kSerialPosition, p.opening, rng);
    p.com_final = com;
    p.opening_final = o;
    p.offered = true;

    SerialCommit sc;
    sc.session = offer.session;
    sc.com = com;
    sc.link = prove_update_link(vc, p.com, com, p.M, p.M_final, p.opening, o, kSerialPosition,
                                serial_context(pk, offer.session, offer.serial), rng);
    return sc;
}

const Credential& Wallet::complete(const IssuerDirectory& dir, const IssueResponse& resp) {
    auto it = pending_.find(resp.session);
    if (it == pending_.end() || !it->second.offered) {
        throw ProtocolError(Reason::unknown_session, "no pending request for this response");
    }
    PendingIssue p = it->second;
    const auto& pk = dir.key(p.schema_id);
    if (resp.sig.A.size() != pk.l() || !cl_verify(pk, p.M_final, p.opening_final.m0, resp.sig)) {
        throw ProtocolError(Reason::malicious_issuer, "signature does not verify on the committed attributes");
    }
    pending_.erase(it);
    if (p.replaces) {
        std::erase_if(creds_, [&](const Credential& c) { return c.id() == *p.replaces; });
    }
    creds_.push_back(Credential{p.schema_id, pk.fingerprint(), resp.sig, p.M_final, p.opening_final});
    return creds_.back();
}

UpdateRequest Wallet::begin_update(const IssuerDirectory& dir, const Schema& schema, const Bytes& cred_id,
                                   std::string_view field, const FieldValue& value, Rng& rng) {
    if (is_reserved(field)) throw PolicyError("field '" + std::string(field) + "' is reserved and cannot be updated");
    const Credential& cred = credential(cred_id);
    if (cred.schema_id != schema.id) throw SchemaError("credential is not a '" + schema.id + "'");
    std::uint32_t pos = schema.position(field);
    const auto& pk = dir.key(schema.id);
    auto vc = pk.vc();

    UpdateRequest u;
    u.session = random_bytes(rng, kSessionBytes);
    u.schema_id = schema.id;
    u.old_serial = cred.serial();
    u.position = pos;
    u.value = field_scalar(pp_, schema.at_position(pos), value);
    auto ctx = update_context(pk, u.session);

    PresentationRequest req;
    req.disclose = {kSerialPosition};
    Opening bind{Scalar::random(pp_.group(), rng)};
    req.bind = bind;
    u.proof = prove_presentation(pk, cred.sig, cred.M, cred.m0.m0, req, ctx, rng);

    AttributeVector M_new = cred.M;
    M_new[pos - 1] = u.value;
    auto [com_new, o_new] = vc_update(vc, u.proof.bound->com, cred.M[pos - 1], u.value, pos, bind, rng);
    u.com_new = com_new;
    u.link = prove_update_link(vc, u.proof.bound->com, com_new, cred.M, M_new, bind, o_new, pos, ctx, rng);

    PendingIssue p;
    p.session = u.session;
    p.schema_id = schema.id;
    p.M = std::move(M_new);
    p.opening = o_new;
    p.com = com_new;
    p.replaces = cred_id;
    pending_.insert_or_assign(u.session, std::move(p));
    return u;
}

Bytes Wallet::encode() const {
    ByteWriter w;
    put_header(w, kTagWallet, kVersion);
    w.bytes(pp_digest(pp_)).str(wid_).u32(static_cast<std::uint32_t>(creds_.size()));
    for (const auto& c : creds_) w.bytes(c.encode());
    w.u32(static_cast<std::uint32_t>(pending_.size()));
    for (const auto& [k, p] : pending_) {
        w.bytes(p.session).str(p.schema_id);
        put_vec(w, p.M);
        put(w, p.opening.m0);
        w.bytes(p.com.encode());
        w.u8(p.replaces ? 1 : 0);
        if (p.replaces) w.bytes(*p.replaces);
        w.u8(p.offered ? 1 : 0);
        if (p.offered) {
            put_vec(w, p.M_final);
            put(w, p.opening_final.m0);
            w.bytes(p.com_final.encode());
        }
    }
    return w.take();
}

Wallet Wallet::decode(const PublicParams& pp, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagWallet, kVersion);
    expect_pp(r, pp);
    Wallet w(pp, r.str());
    const auto& ctx = pp.group();
    std::uint32_t n = r.count(4);
    for (std::uint32_t i = 0; i < n; ++i) w.creds_.push_back(Credential::decode(ctx, r.bytes()));
    std::uint32_t m = r.count(4);
    AscendingKeys<Bytes> order("pending sessions");
    for (std::uint32_t i = 0; i < m; ++i) {
        PendingIssue p;
        order.next(p.session = get_session(r), r.offset());
        p.schema_id = r.str();
        p.M = get_scalars(r, ctx);
        p.opening = Opening{get_scalar(r, ctx)};
        p.com = Commitment::decode(ctx, r.bytes());
        if (get_bool(r)) p.replaces = r.bytes();
        p.offered = get_bool(r);
        if (p.offered) {
            p.M_final = get_scalars(r, ctx);
            p.opening_final = Opening{get_scalar(r, ctx)};
            p.com_final = Commitment::decode(ctx, r.bytes());
        }
        auto key = p.session;
        w.pending_.emplace(std::move(key), std::move(p));
    }
    r.expect_end();
    return w;
}

IssueQuery faith_ask(Wallet& w, const IssuerDirectory& dir, const Schema& schema, const Document& doc,
                     const AuthResponse& auth, Rng& rng) {
    return w.ask(dir, schema, doc, auth, rng);
}

// ---- issuer

Issuer Issuer::create(const PublicParams& pp, const SchemaRegistry& schemas, Bytes authority_pk, Rng& rng) {
    Issuer is(pp);
    is.authority_pk_ = std::move(authority_pk);
    for (const auto& id : schemas.ids()) {
        auto [sk, pk] = cl_keygen(pp, schemas.get(id).length(), rng);
        is.keys_.emplace(id, IssuerKeyPair{std::move(sk), std::move(pk)});
    }
    return is;
}

Issuer::Issuer(const Issuer& o) : pp_(o.pp_), registry_(o.pp_) {
    std::lock_guard lk(o.mu_);
    authority_pk_ = o.authority_pk_;
    keys_ = o.keys_;
    issued_ = o.issued_;
    pending_ = o.pending_;
    registry_ = o.registry_;
}

IssuerDirectory Issuer::directory() const {
    IssuerDirectory d{pp_, authority_pk_, {}};
    for (const auto& [id, kp] : keys_) d.keys.emplace(id, kp.pk);
    return d;
}

const IssuerKeyPair& Issuer::keys(std::string_view schema_id) const {
    auto it = keys_.find(schema_id);
    if (it == keys_.end()) throw ProtocolError(Reason::schema_mismatch, "issuer has no key for '" + std::string(schema_id) + "'");
    return it->second;
}

Scalar Issuer::fresh_serial(Rng& rng) const {
    // s + e must not vanish for the coming epochs, i.e. -s outside
    // [cur, cur + window). On tiny test groups the window shrinks.
    mpz_class q = pp_.q();
    mpz_class window = std::min<mpz_class>(mpz_class(std::to_string(kSerialWindow)), (q - 1) / 2);
    mpz_class cur(std::to_string(registry_.epoch()));
    for (;;) {
        Scalar s = Scalar::random_nonzero(pp_.group(), rng);
        mpz_class neg = (-s).value();
        if (neg < cur || neg >= cur + window) return s;
    }
}

SerialOffer Issuer::begin_issue(const AuthResponse& auth, const IssueQuery& q, Rng& rng) {
    if (!verify_auth(authority_pk_, auth)) throw ProtocolError(Reason::auth_signature, "authority signature invalid");
    if (!auth.verdict) throw ProtocolError(Reason::auth_verdict, "document was not authenticated");
    if (auth.wid != q.wid || auth.schema_id != q.schema_id) {
        throw ProtocolError(Reason::auth_mismatch, "authority response is for another wallet or document");
    }
    const auto& kp = keys(q.schema_id);
    if (q.com.l != kp.pk.l()) throw ProtocolError(Reason::schema_mismatch, "commitment length");
    auto vc = kp.pk.vc();
    if (!vc_verify(vc, q.com, wid_scalar(pp_, q.wid), kWidPosition, q.pi_wid)) {
        throw ProtocolError(Reason::auth_mismatch, "commitment does not hold the authenticated wallet id");
    }
    if (!verify_opening(vc, q.com, q.pi_M, issue_context(kp.pk, auth, q))) {
        throw ProtocolError(Reason::bad_proof, "opening proof rejected");
    }
    std::lock_guard lk(mu_);
    if (pending_.contains(q.session)) throw ProtocolError(Reason::replay, "session already open");
    Scalar s = fresh_serial(rng);
    pending_.emplace(q.session, PendingSession{q.schema_id, q.com, s, std::nullopt});
    return {q.session, s};
}

SerialOffer Issuer::begin_update(const UpdateRequest& req, Rng& rng) {
    const auto& kp = keys(req.schema_id);
    if (req.position <= kSerialPosition || req.position > kp.pk.l()) {
        throw ProtocolError(Reason::policy, "position cannot be updated");
    }
    if (!req.proof.bound) throw ProtocolError(Reason::bad_proof, "update needs a bound commitment");
    auto ctx = update_context(kp.pk, req.session);
    if (!verify_presentation(kp.pk, req.proof, {{kSerialPosition, req.old_serial}}, {}, {}, ctx)) {
        throw ProtocolError(Reason::bad_proof, "possession proof rejected");
    }
    if (!verify_update_link(kp.pk.vc(), req.proof.bound->com, req.com_new, req.position, req.value, req.link, ctx)) {
        throw ProtocolError(Reason::bad_proof, "update link rejected");
    }
    std::lock_guard lk(mu_);
    if (registry_.is_revoked(req.old_serial)) throw ProtocolError(Reason::revoked, "credential already revoked");
    for (const auto& [k, p] : pending_) {
        if (p.revoke_on_finish && *p.revoke_on_finish == req.old_serial) {
            throw ProtocolError(Reason::replay, "an update of this credential is already in progress");
        }
    }
    if (pending_.contains(req.session)) throw ProtocolError(Reason::replay, "session already open");
    Scalar s = fresh_serial(rng);
    pending_.emplace(req.session, PendingSession{req.schema_id, req.com_new, s, req.old_serial});
    return {req.session, s};
}

IssueResponse Issuer::finish(const SerialCommit& sc, Rng& rng) {
    std::lock_guard lk(mu_);
    auto it = pending_.find(sc.session);
    if (it == pending_.end()) throw ProtocolError(Reason::unknown_session, "no open session");
    const PendingSession& p = it->second;
    const auto& kp = keys(p.schema_id);
    if (!verify_update_link(kp.pk.vc(), p.com, sc.com, kSerialPosition, p.serial, sc.link,
                            serial_context(kp.pk, sc.session, p.serial))) {
        throw ProtocolError(Reason::bad_proof, "serial link rejected");
    }
    IssueResponse resp{sc.session, cl_issue_on_commitment(kp.sk, kp.pk, sc.com, rng)};
    if (p.revoke_on_finish) registry_.revoke(*p.revoke_on_finish);
    ++issued_;
    pending_.erase(it);
    return resp;
}

bool Issuer::revoke(const Scalar& serial) {
    std::lock_guard lk(mu_);
    return registry_.revoke(serial);
}

std::shared_ptr<const EpochList> Issuer::publish_epoch() {
    std::lock_guard lk(mu_);
    return registry_.publish_epoch();
}

Bytes Issuer::encode() const {
    std::lock_guard lk(mu_);
    ByteWriter w;
    put_header(w, kTagIssuer, kVersion);
    w.bytes(pp_digest(pp_)).bytes(authority_pk_).u32(static_cast<std::uint32_t>(keys_.size()));
    for (const auto& [id, kp] : keys_) w.str(id).bytes(kp.sk.encode()).bytes(kp.pk.encode());
    w.u64(issued_).u32(static_cast<std::uint32_t>(pending_.size()));
    for (const auto& [session, p] : pending_) {
        w.bytes(session).str(p.schema_id).bytes(p.com.encode());
        put(w, p.serial);
        w.u8(p.revoke_on_finish ? 1 : 0);
        if (p.revoke_on_finish) put(w, *p.revoke_on_finish);
    }
    w.bytes(registry_.encode());
    return w.take();
}

Issuer Issuer::decode(const PublicParams& pp, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagIssuer, kVersion);
    expect_pp(r, pp);
    Issuer is(pp);
    const auto& ctx = pp.group();
    is.authority_pk_ = r.bytes();
    std::uint32_t n = r.count(8);
    AscendingKeys<std::string> key_order("schema keys");
    for (std::uint32_t i = 0; i < n; ++i) {
        auto id = r.str();
        key_order.next(id, r.offset());
        auto sk = IssuerSecretKey::decode(ctx, r.bytes());
        auto pk = IssuerPublicKey::decode(pp, r.bytes());
        is.keys_.emplace(id, IssuerKeyPair{std::move(sk), std::move(pk)});
    }
    is.issued_ = r.u64();
    std::uint32_t m = r.count(8);
    AscendingKeys<Bytes> session_order("pending sessions");
    for (std::uint32_t i = 0; i < m; ++i) {
        Bytes session = get_session(r);
        session_order.next(session, r.offset());
        PendingSession p{r.str(), Commitment::decode(ctx, r.bytes()), get_scalar(r, ctx), std::nullopt};
        if (get_bool(r)) p.revoke_on_finish = get_scalar(r, ctx);
        is.pending_.emplace(std::move(session), std::move(p));
    }
    is.registry_ = RevocationRegistry::decode(pp, r.bytes());
    r.expect_end();
    return is;
}

const Credential& faith_issue(Issuer& issuer, Wallet& wallet, const AuthResponse& auth, const IssueQuery& q, Rng& rng) {
    auto dir = issuer.directory();
    auto offer = issuer.begin_issue(auth, q, rng);
    auto sc = wallet.accept_offer(dir, offer, rng);
    auto resp = issuer.finish(sc, rng);
    return wallet.complete(dir, resp);
}

const Credential& faith_update(Issuer& issuer, Wallet& wallet, const Schema& schema, const Bytes& cred_id,
                               std::string_view field, const FieldValue& value, Rng& rng) {
    auto dir = issuer.directory();
    auto req = wallet.begin_update(dir, schema, cred_id, field, value, rng);
    auto offer = issuer.begin_update(req, rng);
    auto sc = wallet.accept_offer(dir, offer, rng);
    auto resp = issuer.finish(sc, rng);
    return wallet.complete(dir, resp);
}

// ---- verifier

Verifier::Verifier(IssuerDirectory dir, SchemaRegistry schemas, std::string id)
    : dir_(std::move(dir)), schemas_(std::move(schemas)), id_(std::move(id)) {}

Verifier::Verifier(const Verifier& o) : dir_(o.dir_), schemas_(o.schemas_), id_(o.id_) {
    std::lock_guard lk(o.mu_);
    seen_ = o.seen_;
    newest_epoch_ = o.newest_epoch_;
}

VerifyOutcome Verifier::verify(const Presentation& pres, const Criterion& phi, const EpochList& epoch) {
    auto reject = [](Reason r, std::string detail) {
        VerifyOutcome o;
        o.reason = r;
        o.detail = std::move(detail);
        return o;
    };
    if (!schemas_.contains(phi.schema_id) || !dir_.keys.contains(phi.schema_id)) {
        return reject(Reason::unknown_issuer, "no issuer key for '" + phi.schema_id + "'");
    }
    const Schema& schema = schemas_.get(phi.schema_id);
    const auto& pk = dir_.key(phi.schema_id);
    if (phi.verifier_id != id_ || pres.verifier_id != id_) {
        return reject(Reason::replay, "presentation addressed to '" + pres.verifier_id + "'");
    }
    if (pres.schema_id != phi.schema_id) return reject(Reason::coverage, "wrong credential type");
    for (auto pos : phi.disclosed_positions(schema)) {
        if (!pres.disclosed.contains(pos)) return reject(Reason::coverage, "missing disclosure of '" + schema.at_position(pos).name + "'");
    }
    for (const auto& want : phi.range_predicates(schema)) {
        if (std::find(pres.predicates.begin(), pres.predicates.end(), want) == pres.predicates.end()) {
            return reject(Reason::coverage, "missing predicate on '" + schema.at_position(want.position).name + "'");
        }
    }
    {
        std::lock_guard lk(mu_);
        if (seen_.contains(pres.nonce)) return reject(Reason::replay, "nonce already used");
        // never go back to a list older than one already relied on
        if (epoch.epoch < newest_epoch_) {
            return reject(Reason::stale_epoch, "list for epoch " + std::to_string(epoch.epoch) + ", already at " +
                                                   std::to_string(newest_epoch_));
        }
    }
    if (pres.nm.epoch != epoch.epoch) return reject(Reason::stale_epoch, "presentation for epoch " + std::to_string(pres.nm.epoch));

    RevocationStatus st;
    try {
        auto ctx = show_context(pres.schema_id, pres.verifier_id, pres.nonce, pres.nm.epoch);
        st = verify_non_membership(pk, pres.proof, pres.nm, epoch, pres.disclosed, pres.predicates, {}, ctx);
    } catch (const Error& e) {
        return reject(Reason::forgery, e.what());
    }
    if (st == RevocationStatus::forgery) return reject(Reason::forgery, "proof rejected");
    if (st == RevocationStatus::revoked) return reject(Reason::revoked, "credential revoked");
    if (st == RevocationStatus::stale_epoch) return reject(Reason::stale_epoch, "epoch mismatch");

    {
        std::lock_guard lk(mu_);
        if (!seen_.insert(pres.nonce).second) return reject(Reason::replay, "nonce already used");
        newest_epoch_ = std::max(newest_epoch_, epoch.epoch);
    }
    VerifyOutcome ok;
    ok.accepted = true;
    for (const auto& [pos, v] : pres.disclosed) {
        ok.disclosed.emplace(pos == kWidPosition ? "wid" : pos == kSerialPosition ? "serial" : schema.at_position(pos).name, v);
    }
    return ok;
}

Bytes Verifier::encode() const {
    std::lock_guard lk(mu_);
    ByteWriter w;
    put_header(w, kTagVerifier, kVersion);
    w.str(id_).u64(newest_epoch_).u32(static_cast<std::uint32_t>(seen_.size()));
    for (const auto& n : seen_) w.bytes(n);
    return w.take();
}

Verifier Verifier::decode(IssuerDirectory dir, SchemaRegistry schemas, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagVerifier, kVersion);
    Verifier v(std::move(dir), std::move(schemas), r.str());
    v.newest_epoch_ = r.u64();
    std::uint32_t n = r.count(4);
    AscendingKeys<Bytes> order("nonces");
    for (std::uint32_t i = 0; i < n; ++i) {
        auto nonce = r.bytes();
        order.next(nonce, r.offset());
        v.seen_.insert(std::move(nonce));
    }
    r.expect_end();
    return v;
}

VerifyOutcome faith_verify_presentation(Verifier& v, const Presentation& pres, const Criterion& phi,
                                        const EpochList& epoch) {
    return v.verify(pres, phi, epoch);
}

}  // namespace zkfaith
