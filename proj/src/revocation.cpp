#include "zkfaith/revocation.hpp"

#include <algorithm>

#include "zkfaith/codec.hpp"
#include "zkfaith/hash.hpp"

namespace zkfaith {

namespace {

constexpr std::uint8_t kTagRegistry = 0x40;
constexpr std::uint8_t kTagEpochList = 0x41;
constexpr std::uint8_t kTagNonMembership = 0x42;
constexpr std::uint8_t kVersion = 1;

Scalar epoch_scalar(const GroupContext& ctx, std::uint64_t e) { return Scalar(ctx, mpz_class(std::to_string(e))); }

std::vector<G1> sorted_tags(std::vector<G1> tags) {
    std::sort(tags.begin(), tags.end(), [](const G1& a, const G1& b) { return a.encode() < b.encode(); });
    return tags;
}

}  // namespace

bool serial_degenerate(const Scalar& serial, std::uint64_t epoch) {
    return (serial + epoch_scalar(serial.context(), epoch)).is_zero();
}

G1 epoch_tag(const PublicParams& pp, const Scalar& serial, std::uint64_t epoch) {
    Scalar d = serial + epoch_scalar(pp.group(), epoch);
    if (d.is_zero()) throw DegenerateSerialError("serial + epoch is zero");
    return pp.g * d.inverse();
}

Bytes chain_digest(const Bytes& prev, std::uint64_t epoch, const std::vector<G1>& tags) {
    ByteWriter w;
    w.bytes(prev).u64(epoch);
    put_vec(w, tags);
    std::vector<Bytes> parts{w.take()};
    auto d = sha256(encode_parts("zkfaith/registry", parts));
    return Bytes(d.begin(), d.end());
}

// ---- EpochList

bool EpochList::contains(const G1& tag) const {
    return std::binary_search(tags.begin(), tags.end(), tag,
                              [](const G1& a, const G1& b) { return a.encode() < b.encode(); });
}

Bytes EpochList::encode() const {
    ByteWriter w;
    put_header(w, kTagEpochList, kVersion);
    w.u64(epoch).u32(static_cast<std::uint32_t>(tags.size())).bytes(digest);
    for (const auto& t : tags) put(w, t);
    return w.take();
}

EpochList EpochList::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagEpochList, kVersion);
    EpochList out;
    out.epoch = r.u64();
    std::uint32_t n = r.count(4);
    out.digest = r.bytes();
    if (out.digest.size() != 32) throw DecodeError("bad registry digest length", r.offset());
    Bytes prev;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::size_t at = r.offset();
        G1 t = get_g1(r, ctx);
        auto enc = t.encode();
        if (t.is_identity()) throw DecodeError("identity tag", at);
        if (i > 0 && !(prev < enc)) throw DecodeError("tags not strictly sorted", at);
        prev = enc;
        out.tags.push_back(std::move(t));
    }
    r.expect_end();
    return out;
}

// ---- registry

RevocationRegistry::RevocationRegistry(PublicParams pp) : pp_(std::move(pp)) {
    auto first = std::make_shared<EpochList>();
    first->epoch = 0;
    first->digest = chain_digest(Bytes(32, 0), 0, {});
    published_.emplace(0, std::move(first));
}

RevocationRegistry::RevocationRegistry(const RevocationRegistry& o) : pp_(o.pp_) {
    std::lock_guard lk(o.mu_);
    revoked_ = o.revoked_;
    revoked_at_ = o.revoked_at_;
    published_ = o.published_;
}

RevocationRegistry& RevocationRegistry::operator=(const RevocationRegistry& o) {
    if (this == &o) return *this;
    std::scoped_lock lk(mu_, o.mu_);
    pp_ = o.pp_;
    revoked_ = o.revoked_;
    revoked_at_ = o.revoked_at_;
    published_ = o.published_;
    return *this;
}

bool RevocationRegistry::revoke(const Scalar& serial) {
    std::lock_guard lk(mu_);
    auto key = serial.encode();
    if (revoked_.contains(key)) return false;
    revoked_.emplace(key, serial);
    revoked_at_.emplace(key, published_.rbegin()->first + 1);
    return true;
}

bool RevocationRegistry::is_revoked(const Scalar& serial) const {
    std::lock_guard lk(mu_);
    return revoked_.contains(serial.encode());
}

std::size_t RevocationRegistry::revoked_count() const {
    std::lock_guard lk(mu_);
    return revoked_.size();
}

std::shared_ptr<const EpochList> RevocationRegistry::publish_epoch() {
    std::lock_guard lk(mu_);
    const auto& last = published_.rbegin()->second;
    auto next = std::make_shared<EpochList>();
    next->epoch = last->epoch + 1;
    std::vector<G1> tags;
    for (const auto& [k, s] : revoked_) {
        // a serial whose sum with this epoch vanishes has no tag; the
        // issuer resamples such serials so this is unreachable in practice
        if (serial_degenerate(s, next->epoch)) continue;
        tags.push_back(epoch_tag(pp_, s, next->epoch));
    }
    next->tags = sorted_tags(std::move(tags));
    next->digest = chain_digest(last->digest, next->epoch, next->tags);
    std::shared_ptr<const EpochList> out = next;
    published_.emplace(next->epoch, out);
    return out;
}

std::uint64_t RevocationRegistry::epoch() const {
    std::lock_guard lk(mu_);
    return published_.rbegin()->first;
}

Bytes RevocationRegistry::digest() const { return current()->digest; }

std::shared_ptr<const EpochList> RevocationRegistry::current() const {
    std::lock_guard lk(mu_);
    return published_.rbegin()->second;
}

std::shared_ptr<const EpochList> RevocationRegistry::published(std::uint64_t e) const {
    std::lock_guard lk(mu_);
    auto it = published_.find(e);
    return it == published_.end() ? nullptr : it->second;
}

bool RevocationRegistry::history_consistent() const {
    std::lock_guard lk(mu_);
    Bytes prev(32, 0);
    std::uint64_t expect = 0;
    for (const auto& [e, list] : published_) {
        if (e != expect++ || list->epoch != e) return false;
        std::vector<G1> tags;
        for (const auto& [k, s] : revoked_) {
            if (revoked_at_.at(k) <= e && !serial_degenerate(s, e)) tags.push_back(epoch_tag(pp_, s, e));
        }
        tags = sorted_tags(std::move(tags));
        if (tags != list->tags) return false;
        Bytes d = chain_digest(prev, e, tags);
        if (d != list->digest) return false;
        prev = d;
    }
    return true;
}

Bytes RevocationRegistry::encode() const {
    std::lock_guard lk(mu_);
    ByteWriter w;
    put_header(w, kTagRegistry, kVersion);
    auto pd = pp_.digest();
    w.bytes(Bytes(pd.begin(), pd.end()));
    w.u32(static_cast<std::uint32_t>(revoked_.size()));
    for (const auto& [k, s] : revoked_) {
        put(w, s);
        w.u64(revoked_at_.at(k));
    }
    w.u32(static_cast<std::uint32_t>(published_.size()));
    for (const auto& [e, list] : published_) w.bytes(list->encode());
    return w.take();
}

RevocationRegistry RevocationRegistry::decode(const PublicParams& pp, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagRegistry, kVersion);
    auto pd = pp.digest();
    if (r.bytes() != Bytes(pd.begin(), pd.end())) throw DecodeError("registry bound to other parameters", r.offset());
    RevocationRegistry out(pp);
    out.published_.clear();
    std::uint32_t n = r.count(8);
    AscendingKeys<Bytes> serial_order("revoked serials");
    for (std::uint32_t i = 0; i < n; ++i) {
        Scalar s = get_scalar(r, pp.group());
        serial_order.next(s.encode(), r.offset());
        std::uint64_t at = r.u64();
        out.revoked_.emplace(s.encode(), s);
        out.revoked_at_.emplace(s.encode(), at);
    }
    std::uint32_t m = r.count(4);
    AscendingKeys<std::uint64_t> epoch_order("epochs");
    for (std::uint32_t i = 0; i < m; ++i) {
        auto list = std::make_shared<EpochList>(EpochList::decode(pp.group(), r.bytes()));
        auto e = list->epoch;
        epoch_order.next(e, r.offset());
        out.published_.emplace(e, std::move(list));
    }
    r.expect_end();
    if (out.published_.empty() || !out.history_consistent()) throw IntegrityError("registry history does not recompute");
    return out;
}

// ---- non-membership

Bytes NonMembershipProof::encode() const {
    ByteWriter w;
    put_header(w, kTagNonMembership, kVersion);
    w.u64(epoch);
    put(w, tag);
    return w.take();
}

NonMembershipProof NonMembershipProof::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagNonMembership, kVersion);
    NonMembershipProof out;
    out.epoch = r.u64();
    out.tag = get_g1(r, ctx);
    r.expect_end();
    return out;
}

NonMembershipProof prove_non_membership(const PublicParams& pp, const Scalar& serial, std::uint64_t epoch) {
    return {epoch, epoch_tag(pp, serial, epoch)};
}

AttributeLink non_membership_link(const PublicParams& pp, const NonMembershipProof& nm) {
    return {kSerialPosition, nm.tag, pp.g - nm.tag * epoch_scalar(pp.group(), nm.epoch)};
}

const char* to_string(RevocationStatus s) {
    switch (s) {
        case RevocationStatus::ok: return "ok";
        case RevocationStatus::revoked: return "revoked";
        case RevocationStatus::stale_epoch: return "stale-epoch";
        case RevocationStatus::forgery: return "forgery";
    }
    return "?";
}

RevocationStatus verify_non_membership(const IssuerPublicKey& pk, const PresentationProof& proof,
                                       const NonMembershipProof& nm, const EpochList& list,
                                       const std::map<std::uint32_t, Scalar>& disclosed,
                                       const std::vector<RangePredicate>& predicates,
                                       std::vector<AttributeLink> links, std::span<const std::uint8_t> context) {
    if (nm.epoch != list.epoch) return RevocationStatus::stale_epoch;
    if (nm.tag.is_identity()) return RevocationStatus::forgery;
    links.push_back(non_membership_link(pk.pp, nm));
    if (!verify_presentation(pk, proof, disclosed, predicates, links, context)) return RevocationStatus::forgery;
    if (list.contains(nm.tag)) return RevocationStatus::revoked;
    return RevocationStatus::ok;
}

}  // namespace zkfaith
