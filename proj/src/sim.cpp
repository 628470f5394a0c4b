#include "zkfaith/sim.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "zkfaith/codec.hpp"
#include "zkfaith/hash.hpp"

namespace zkfaith {

const char* to_string(Expect e) { return e == Expect::accept ? "accept" : "reject"; }

const std::vector<AdversaryStrategy>& strategies() {
    static const std::vector<AdversaryStrategy> all = {
        {"honest", "none; update on odd trials", Expect::accept},
        // The verdict signs a document digest the issuer never sees opened,
        // so committing to other values than the checked ones goes through.
        {"substituted-attributes", "commit to values other than the authenticated document", Expect::accept},
        {"forged-doc", "self-signed or unsigned verdict; self-issued credential", Expect::reject},
        {"wid-mismatch", "reuse another wallet's verdict", Expect::reject},
        {"verdict-zero", "forward a negative verdict", Expect::reject},
        {"tampered-auth-signature", "edit a signed verdict", Expect::reject},
        {"malicious-issuer", "issuer signs a commitment other than the claimant's", Expect::reject},
        {"tampered-signature", "edit the credential signature, attributes or m0", Expect::reject},
        {"forged-signature", "sign with a foreign key or transplant a signature", Expect::reject},
        {"mutated-proof", "every single field of a presentation, one at a time", Expect::reject},
        {"transcript-splicing", "combine components of two presentations", Expect::reject},
        {"revoked-credential", "show after revocation", Expect::reject},
        {"replayed-nonce", "resend or re-prove under a used nonce", Expect::reject},
        {"stale-epoch", "show against an old revocation list", Expect::reject},
        {"double-update", "update a credential that was already replaced", Expect::reject},
    };
    return all;
}

const AdversaryStrategy& find_strategy(std::string_view id) {
    for (const auto& s : strategies()) {
        if (s.id == id) return s;
    }
    throw UsageError("unknown strategy '" + std::string(id) + "'");
}

std::string ExperimentResult::report_line() const {
    std::ostringstream o;
    o << "strategy=" << strategy << " trials=" << trials << " attempts=" << attempts << " accepts=" << accepts
      << " expected=" << to_string(expected) << " digest=" << to_hex(digest) << (pass ? " PASS" : " FAIL");
    return o.str();
}

std::string UnlinkabilityReport::report_line() const {
    std::ostringstream o;
    o.precision(6);
    o << "unlinkability pairs=" << pairs << " collisions=" << collisions << " same_shape=" << same_shape
      << " match_rate=" << match_rate << " chance_rate=" << chance_rate << " z=" << z << (pass ? " PASS" : " FAIL");
    return o.str();
}

// ---- documents and criteria

namespace {

std::string random_text(Rng& rng, std::size_t n) {
    std::string s(n, 'A');
    for (auto& c : s) c = static_cast<char>('A' + rng.uniform(26));
    return s;
}

Bytes random_bytes(Rng& rng, std::size_t n) {
    Bytes b(n);
    rng.fill(b);
    return b;
}

}  // namespace

Document sample_document(const Schema& schema, const std::string& wid, Rng& rng, std::int64_t today) {
    Document d;
    d.schema_id = schema.id;
    d.wid = wid;
    for (const auto& f : schema.fields) {
        if (!f.required && rng.uniform(2) == 0) continue;
        switch (f.type) {
            case FieldType::text:
                d.fields[f.name] = random_text(rng, 4 + rng.uniform(8));
                break;
            case FieldType::integer:
                d.fields[f.name] = static_cast<std::int64_t>(rng.uniform(13));
                break;
            case FieldType::date:
                if (f.name == schema.expiry_field) {
                    d.fields[f.name] = today + 1 + static_cast<std::int64_t>(rng.uniform(3650));
                } else if (f.name == "birthdate") {
                    auto years = 19 + static_cast<int>(rng.uniform(62));
                    d.fields[f.name] = years_before(today, years) - static_cast<std::int64_t>(rng.uniform(365));
                } else {
                    d.fields[f.name] = today - static_cast<std::int64_t>(rng.uniform(3650));
                }
                break;
        }
    }
    return d;
}

std::vector<Criterion> sample_criteria(const Schema& schema, const std::string& verifier_id, std::int64_t today) {
    std::vector<Criterion> out(3, Criterion{verifier_id, schema.id, {}, {}});
    for (const auto& f : schema.fields) {
        if (f.required && f.type == FieldType::text) {
            out[1].disclose.insert(f.name);
            out[2].disclose.insert(f.name);
            break;
        }
    }
    for (const auto& f : schema.fields) {
        if (f.name == "birthdate" && f.range) out[2].predicates.push_back(Criterion::min_age(f.name, 18, today));
    }
    if (schema.expiry_field && schema.field(*schema.expiry_field).range) {
        out[2].predicates.push_back({*schema.expiry_field, RangeKind::at_least, today, 16});
    }
    return out;
}

std::vector<Bytes> proof_components(const Presentation& p) {
    std::vector<Bytes> out;
    const auto& pr = p.proof;
    out.push_back(pr.sig.a.encode());
    for (const auto& x : pr.sig.A) out.push_back(x.encode());
    out.push_back(pr.sig.b.encode());
    for (const auto& x : pr.sig.B) out.push_back(x.encode());
    out.push_back(pr.sig.c.encode());
    out.push_back(pr.T.encode());
    out.push_back(pr.s_rho.encode());
    out.push_back(pr.s_m0.encode());
    for (const auto& s : pr.s_hidden) out.push_back(s.encode());
    for (const auto& rc : pr.ranges) {
        out.push_back(rc.C.encode());
        out.push_back(rc.T_C.encode());
        out.push_back(rc.s_t.encode());
        for (const auto& b : rc.bits) {
            for (const auto* g : {&b.C, &b.T0, &b.T1}) out.push_back(g->encode());
            for (const auto* s : {&b.c0, &b.s0, &b.s1}) out.push_back(s->encode());
        }
        out.push_back(rc.T_D.encode());
        out.push_back(rc.s_D.encode());
    }
    for (const auto& t : pr.link_T) out.push_back(t.encode());
    if (pr.bound) {
        out.push_back(pr.bound->com.c.encode());
        out.push_back(pr.bound->T.encode());
        out.push_back(pr.bound->s0.encode());
    }
    out.push_back(p.nm.tag.encode());
    return out;
}

// ---- experiment machinery

namespace {

struct Tally {
    std::uint64_t attempts = 0, accepts = 0;
    std::map<std::string, std::uint64_t> outcomes;
    Bytes log;

    void note(std::span<const std::uint8_t> msg) {
        ByteWriter w;
        w.bytes(msg);
        log.insert(log.end(), w.data().begin(), w.data().end());
    }
    void record(bool accepted, const std::string& label) {
        ++attempts;
        if (accepted) ++accepts;
        ++outcomes[accepted ? "accepted" : label];
        note(to_bytes(label));
    }
};

// One trial's world: fresh authority, issuer and verifier for one schema.
struct Arena {
    PublicParams pp;
    SchemaRegistry schemas;
    const Schema& schema;
    Rng rng;
    AuthorityKey authority;
    Issuer issuer;
    IssuerDirectory dir;
    Verifier verifier;
    std::vector<Criterion> criteria;
    Tally& tally;
    std::uint64_t index;

    static SchemaRegistry only(const std::string& id) {
        SchemaRegistry r;
        r.add(SchemaRegistry::builtin().get(id));
        return r;
    }

    Arena(const PublicParams& p, std::uint64_t i, Rng r, Tally& t)
        : pp(p),
          schemas(only(SchemaRegistry::builtin().ids()[i % SchemaRegistry::builtin().ids().size()])),
          schema(schemas.get(schemas.ids().front())),
          rng(std::move(r)),
          authority(AuthorityKey::generate(rng)),
          issuer(Issuer::create(pp, schemas, authority.public_key, rng)),
          dir(issuer.directory()),
          verifier(dir, schemas, "verifier-" + std::to_string(i)),
          criteria(sample_criteria(schema, verifier.id())),
          tally(t),
          index(i) {
        tally.note(dir.encode());
    }

    const Criterion& phi() const { return criteria[index % criteria.size()]; }
    const Criterion& rich() const { return criteria.back(); }
    const EpochList& epoch() const { return *issuer.registry().current(); }

    std::string wid(std::string_view who) const { return std::string(who) + "-" + std::to_string(index); }
    Document document(const std::string& w) { return sample_document(schema, w, rng); }

    AuthResponse authenticate(const Document& d) {
        auto r = faith_auth(authority, schemas, d, kSimToday);
        tally.note(r.encode());
        return r;
    }

    // Both issuance rounds, every message logged.
    const Credential& issue(Wallet& w, const AuthResponse& r, const IssueQuery& q) {
        tally.note(IssueRequest{r, q}.encode());
        auto offer = issuer.begin_issue(r, q, rng);
        tally.note(offer.encode());
        auto sc = w.accept_offer(dir, offer, rng);
        tally.note(sc.encode());
        auto resp = issuer.finish(sc, rng);
        tally.note(resp.encode());
        return w.complete(dir, resp);
    }

    Credential enroll(Wallet& w) {
        auto d = document(w.wid());
        auto r = authenticate(d);
        auto q = faith_ask(w, dir, schema, d, r, rng);
        return issue(w, r, q);
    }

    Presentation show(const Credential& c, const Criterion& crit, std::span<const std::uint8_t> nonce) {
        auto p = faith_show(dir, schema, c, crit, epoch(), nonce, rng);
        tally.note(p.encode());
        return p;
    }
    Presentation show(const Credential& c, const Criterion& crit) { return show(c, crit, random_bytes(rng, 16)); }

    // Verifier outcome, counted as one attempt.
    void judge(const Presentation& p, const Criterion& crit) {
        auto out = verifier.verify(p, crit, epoch());
        tally.record(out.accepted, out.reason ? to_string(*out.reason) : "rejected");
    }
    // Verifier outcome that is a precondition of the attack, not an attempt.
    void require_accept(const Presentation& p, const Criterion& crit) {
        auto out = verifier.verify(p, crit, epoch());
        if (!out.accepted) throw std::logic_error("honest baseline rejected: " + out.detail);
    }

    // Runs an issuer- or wallet-side step; an exception is a rejection.
    void attempt(const std::function<void()>& f) {
        try {
            f();
            tally.record(true, "accepted");
        } catch (const ProtocolError& e) {
            tally.record(false, to_string(e.reason()));
        } catch (const Error& e) {
            tally.record(false, "error");
        }
    }
};

// ---- strategies

void honest(Arena& a) {
    Wallet w(a.pp, a.wid("wallet"));
    Credential c = a.enroll(w);
    if (a.index % 2 == 1) {
        c = faith_update(a.issuer, w, a.schema, c.id(), *a.schema.expiry_field, FieldValue{kSimToday + 4000}, a.rng);
        a.tally.note(c.encode());
    }
    a.judge(a.show(c, a.phi()), a.phi());
}

void substituted_attributes(Arena& a) {
    Wallet w(a.pp, a.wid("wallet"));
    auto real = a.document(w.wid());
    auto r = a.authenticate(real);
    auto fake = a.document(w.wid());
    Credential c;
    try {
        c = a.issue(w, r, faith_ask(w, a.dir, a.schema, fake, r, a.rng));
    } catch (const ProtocolError& e) {
        a.tally.record(false, to_string(e.reason()));
        return;
    }
    a.judge(a.show(c, a.rich()), a.rich());
}

void forged_doc(Arena& a) {
    Wallet w(a.pp, a.wid("mallory"));
    auto d = a.document(w.wid());
    // verdict from an authority of the adversary's making
    auto own = AuthorityKey::generate(a.rng);
    auto r = faith_auth(own, a.schemas, d, kSimToday);
    a.attempt([&] { a.issue(w, r, faith_ask(w, a.dir, a.schema, d, r, a.rng)); });
    // a verdict that was never signed
    AuthResponse bare{w.wid(), true, a.schema.id, d.digest(), Bytes(64, 0)};
    a.attempt([&] { a.issue(w, bare, faith_ask(w, a.dir, a.schema, d, bare, a.rng)); });
    // skip issuance entirely: credential under a key the adversary generated
    auto rogue = Issuer::create(a.pp, a.schemas, own.public_key, a.rng);
    auto rogue_dir = rogue.directory();
    auto q = faith_ask(w, rogue_dir, a.schema, d, r, a.rng);
    faith_issue(rogue, w, r, q, a.rng);
    Credential c = w.credentials().back();
    c.issuer_fp = a.dir.key(a.schema.id).fingerprint();
    a.judge(a.show(c, a.phi()), a.phi());
}

void wid_mismatch(Arena& a) {
    Wallet victim(a.pp, a.wid("alice")), adv(a.pp, a.wid("mallory"));
    auto d = a.document(victim.wid());
    auto r = a.authenticate(d);
    // the victim's verdict with the adversary's commitment
    a.attempt([&] { a.issue(adv, r, faith_ask(adv, a.dir, a.schema, d, r, a.rng)); });
    // same, claiming the victim's wid in the clear
    a.attempt([&] {
        auto q = faith_ask(adv, a.dir, a.schema, d, r, a.rng);
        q.wid = victim.wid();
        a.issue(adv, r, q);
    });
    // victim's verdict with the victim's wid proof grafted on
    a.attempt([&] {
        auto qv = faith_ask(victim, a.dir, a.schema, d, r, a.rng);
        auto q = faith_ask(adv, a.dir, a.schema, d, r, a.rng);
        q.wid = victim.wid();
        q.pi_wid = qv.pi_wid;
        a.issue(adv, r, q);
    });
}

void verdict_zero(Arena& a) {
    Wallet w(a.pp, a.wid("wallet"));
    auto d = a.document(w.wid());
    d.fields[*a.schema.expiry_field] = std::int64_t{kSimToday - 1 - static_cast<std::int64_t>(a.rng.uniform(1000))};
    auto r = a.authenticate(d);
    if (r.verdict) throw std::logic_error("authority accepted an expired document");
    a.attempt([&] { a.issue(w, r, faith_ask(w, a.dir, a.schema, d, r, a.rng)); });
    auto flipped = r;
    flipped.verdict = true;
    a.attempt([&] { a.issue(w, flipped, faith_ask(w, a.dir, a.schema, d, flipped, a.rng)); });
}

void tampered_auth_signature(Arena& a) {
    Wallet w(a.pp, a.wid("wallet"));
    auto d = a.document(w.wid());
    auto r = a.authenticate(d);
    std::vector<std::function<void(AuthResponse&)>> edits = {
        [&](AuthResponse& x) { x.signature[a.rng.uniform(x.signature.size())] ^= 1u << a.rng.uniform(8); },
        [&](AuthResponse& x) { x.doc_digest[a.rng.uniform(x.doc_digest.size())] ^= 1; },
        [&](AuthResponse& x) { x.wid += "x"; },
        [&](AuthResponse& x) { x.signature.assign(x.signature.size(), 0); },
    };
    for (auto& edit : edits) {
        auto x = r;
        edit(x);
        a.attempt([&] { a.issue(w, x, faith_ask(w, a.dir, a.schema, d, x, a.rng)); });
    }
}

void malicious_issuer(Arena& a) {
    Wallet w(a.pp, a.wid("wallet"));
    auto d = a.document(w.wid());
    auto r = a.authenticate(d);
    const auto& kp = a.issuer.keys(a.schema.id);
    auto run = [&](const std::function<Signature(const SerialCommit&)>& sign) {
        auto q = faith_ask(w, a.dir, a.schema, d, r, a.rng);
        auto offer = a.issuer.begin_issue(r, q, a.rng);
        auto sc = w.accept_offer(a.dir, offer, a.rng);
        a.attempt([&] { w.complete(a.dir, IssueResponse{sc.session, sign(sc)}); });
    };
    // signature on a shifted commitment
    run([&](const SerialCommit& sc) {
        Commitment other = sc.com;
        other.c += a.pp.g * Scalar::random_nonzero(a.pp.group(), a.rng);
        return cl_issue_on_commitment(kp.sk, kp.pk, other, a.rng);
    });
    // signature under a different key
    run([&](const SerialCommit& sc) {
        auto [sk, pk] = cl_keygen(a.pp, a.schema.length(), a.rng);
        return cl_issue_on_commitment(sk, pk, sc.com, a.rng);
    });
}

void tampered_signature(Arena& a) {
    Wallet w(a.pp, a.wid("wallet"));
    Credential c = a.enroll(w);
    auto delta = [&] { return a.pp.g * Scalar::random_nonzero(a.pp.group(), a.rng); };
    std::vector<std::function<void(Credential&)>> edits = {
        [&](Credential& x) { x.sig.a += delta(); },
        [&](Credential& x) { x.sig.A[a.rng.uniform(x.sig.A.size())] += delta(); },
        [&](Credential& x) { x.sig.b += delta(); },
        [&](Credential& x) { x.sig.B[a.rng.uniform(x.sig.B.size())] += delta(); },
        [&](Credential& x) { x.sig.c += delta(); },
        [&](Credential& x) { x.m0.m0 += Scalar::one(a.pp.group()); },
        // claim other values for the signed fields
        [&](Credential& x) {
            for (std::size_t i = kSerialPosition; i < x.M.size(); ++i) x.M[i] += Scalar::one(a.pp.group());
        },
    };
    for (auto& edit : edits) {
        auto x = c;
        edit(x);
        a.judge(a.show(x, a.rich()), a.rich());
    }
}

void forged_signature(Arena& a) {
    Wallet w(a.pp, a.wid("mallory")), other(a.pp, a.wid("bob"));
    Credential mine = a.enroll(w);
    Credential theirs = a.enroll(other);
    const auto fp = a.dir.key(a.schema.id).fingerprint();
    // sign own vector with a self-made key
    {
        auto [sk, pk] = cl_keygen(a.pp, a.schema.length(), a.rng);
        auto [com, o] = vc_commit(pk.vc(), mine.M, a.rng);
        Credential x = mine;
        x.sig = cl_issue_on_commitment(sk, pk, com, a.rng);
        x.m0 = o;
        x.issuer_fp = fp;
        a.judge(a.show(x, a.rich()), a.rich());
    }
    // someone else's signature over own attributes
    {
        Credential x = mine;
        x.sig = theirs.sig;
        a.judge(a.show(x, a.rich()), a.rich());
    }
    // random elements of the right shape
    {
        Credential x = mine;
        auto rnd = [&] { return a.pp.g * Scalar::random_nonzero(a.pp.group(), a.rng); };
        x.sig.a = rnd();
        for (auto& e : x.sig.A) e = rnd();
        x.sig.b = rnd();
        for (auto& e : x.sig.B) e = rnd();
        x.sig.c = rnd();
        a.judge(a.show(x, a.rich()), a.rich());
    }
}

// Every field of the presentation, statement included, mutated on its own.
std::vector<std::function<void(Presentation&)>> single_field_mutations(const PublicParams& pp,
                                                                       const Presentation& p) {
    std::vector<std::function<void(Presentation&)>> m;
    const G1 g = pp.g;
    const Scalar one = Scalar::one(pp.group());
    auto g1 = [&](auto get) { m.push_back([=](Presentation& x) { *get(x) += g; }); };
    auto sc = [&](auto get) { m.push_back([=](Presentation& x) { *get(x) += one; }); };

    g1([](Presentation& x) { return &x.proof.sig.a; });
    for (std::size_t i = 0; i < p.proof.sig.A.size(); ++i) g1([i](Presentation& x) { return &x.proof.sig.A[i]; });
    g1([](Presentation& x) { return &x.proof.sig.b; });
    for (std::size_t i = 0; i < p.proof.sig.B.size(); ++i) g1([i](Presentation& x) { return &x.proof.sig.B[i]; });
    g1([](Presentation& x) { return &x.proof.sig.c; });
    m.push_back([gt = pp.gt](Presentation& x) { x.proof.T *= gt; });
    sc([](Presentation& x) { return &x.proof.s_rho; });
    sc([](Presentation& x) { return &x.proof.s_m0; });
    for (std::size_t i = 0; i < p.proof.s_hidden.size(); ++i) sc([i](Presentation& x) { return &x.proof.s_hidden[i]; });
    for (std::size_t r = 0; r < p.proof.ranges.size(); ++r) {
        g1([r](Presentation& x) { return &x.proof.ranges[r].C; });
        g1([r](Presentation& x) { return &x.proof.ranges[r].T_C; });
        sc([r](Presentation& x) { return &x.proof.ranges[r].s_t; });
        for (std::size_t b = 0; b < p.proof.ranges[r].bits.size(); ++b) {
            g1([r, b](Presentation& x) { return &x.proof.ranges[r].bits[b].C; });
            g1([r, b](Presentation& x) { return &x.proof.ranges[r].bits[b].T0; });
            g1([r, b](Presentation& x) { return &x.proof.ranges[r].bits[b].T1; });
            sc([r, b](Presentation& x) { return &x.proof.ranges[r].bits[b].c0; });
            sc([r, b](Presentation& x) { return &x.proof.ranges[r].bits[b].s0; });
            sc([r, b](Presentation& x) { return &x.proof.ranges[r].bits[b].s1; });
        }
        g1([r](Presentation& x) { return &x.proof.ranges[r].T_D; });
        sc([r](Presentation& x) { return &x.proof.ranges[r].s_D; });
    }
    for (std::size_t i = 0; i < p.proof.link_T.size(); ++i) g1([i](Presentation& x) { return &x.proof.link_T[i]; });
    g1([](Presentation& x) { return &x.nm.tag; });
    m.push_back([](Presentation& x) { x.nm.epoch += 1; });
    for (const auto& [pos, v] : p.disclosed) sc([pos](Presentation& x) { return &x.disclosed.at(pos); });
    for (std::size_t i = 0; i < p.predicates.size(); ++i) {
        m.push_back([i](Presentation& x) { x.predicates[i].threshold += x.predicates[i].kind == RangeKind::at_least ? -1 : 1; });
    }
    for (std::size_t i = 0; i < p.nonce.size(); ++i) m.push_back([i](Presentation& x) { x.nonce[i] ^= 1; });
    m.push_back([](Presentation& x) { x.verifier_id += "'"; });
    return m;
}

void mutated_proof(Arena& a) {
    Wallet w(a.pp, a.wid("wallet"));
    Credential c = a.enroll(w);
    auto p = a.show(c, a.rich());
    for (auto& mutate : single_field_mutations(a.pp, p)) {
        auto x = p;
        mutate(x);
        a.judge(x, a.rich());
    }
    a.require_accept(p, a.rich());
}

void transcript_splicing(Arena& a) {
    Wallet alice(a.pp, a.wid("alice")), bob(a.pp, a.wid("bob"));
    Credential ca = a.enroll(alice), cb = a.enroll(bob);
    const auto& phi = a.rich();
    auto base = a.show(ca, phi);
    std::vector<Presentation> donors = {a.show(cb, phi), a.show(ca, phi)};
    const Bytes base_bytes = base.encode();
    auto try_splice = [&](const std::function<void(Presentation&, const Presentation&)>& splice) {
        for (const auto& donor : donors) {
            auto x = base;
            splice(x, donor);
            if (x.encode() == base_bytes) continue;  // nothing changed
            a.judge(x, phi);
        }
    };
    try_splice([](Presentation& x, const Presentation& d) { x.proof.sig = d.proof.sig; });
    try_splice([](Presentation& x, const Presentation& d) { x.proof.T = d.proof.T; });
    try_splice([](Presentation& x, const Presentation& d) { x.proof.s_rho = d.proof.s_rho; });
    try_splice([](Presentation& x, const Presentation& d) { x.proof.s_m0 = d.proof.s_m0; });
    for (std::size_t i = 0; i < base.proof.s_hidden.size(); ++i) {
        try_splice([i](Presentation& x, const Presentation& d) { x.proof.s_hidden[i] = d.proof.s_hidden[i]; });
    }
    for (std::size_t i = 0; i < base.proof.ranges.size(); ++i) {
        try_splice([i](Presentation& x, const Presentation& d) { x.proof.ranges[i] = d.proof.ranges[i]; });
    }
    for (std::size_t i = 0; i < base.proof.link_T.size(); ++i) {
        try_splice([i](Presentation& x, const Presentation& d) { x.proof.link_T[i] = d.proof.link_T[i]; });
    }
    try_splice([](Presentation& x, const Presentation& d) { x.nm = d.nm; });
    try_splice([](Presentation& x, const Presentation& d) { x.disclosed = d.disclosed; });
    try_splice([](Presentation& x, const Presentation& d) { x.nonce = d.nonce; });
    // whole signature-proof from one, ranges and revocation part from the other
    try_splice([](Presentation& x, const Presentation& d) {
        x.proof.ranges = d.proof.ranges;
        x.nm = d.nm;
        x.proof.link_T = d.proof.link_T;
    });
    for (const auto& d : donors) a.require_accept(d, phi);
    a.require_accept(base, phi);
}

void revoked_credential(Arena& a) {
    Wallet w(a.pp, a.wid("wallet"));
    Credential c = a.enroll(w);
    a.require_accept(a.show(c, a.phi()), a.phi());
    a.issuer.revoke(c.serial());
    a.issuer.publish_epoch();
    a.tally.note(a.epoch().encode());
    a.judge(a.show(c, a.phi()), a.phi());
    // hide behind a tag for a serial nobody revoked
    auto p = a.show(c, a.phi());
    p.nm = prove_non_membership(a.pp, Scalar::random_nonzero(a.pp.group(), a.rng), a.epoch().epoch);
    a.judge(p, a.phi());
}

void replayed_nonce(Arena& a) {
    Wallet w(a.pp, a.wid("wallet"));
    Credential c = a.enroll(w);
    auto p = a.show(c, a.phi());
    a.require_accept(p, a.phi());
    a.judge(p, a.phi());
    a.judge(Presentation::decode(a.pp.group(), p.encode()), a.phi());
    a.judge(a.show(c, a.phi(), p.nonce), a.phi());
}

void stale_epoch(Arena& a) {
    Wallet w(a.pp, a.wid("wallet"));
    Credential c = a.enroll(w);
    auto old = a.show(c, a.phi());
    a.issuer.publish_epoch();
    a.tally.note(a.epoch().encode());
    a.judge(old, a.phi());
    auto relabeled = old;
    relabeled.nm.epoch = a.epoch().epoch;
    a.judge(relabeled, a.phi());
    auto retagged = old;
    retagged.nm = prove_non_membership(a.pp, c.serial(), a.epoch().epoch);
    a.judge(retagged, a.phi());
}

void double_update(Arena& a) {
    Wallet w(a.pp, a.wid("wallet"));
    Credential c = a.enroll(w);
    Wallet backup = Wallet::decode(a.pp, w.encode());
    const auto& f = *a.schema.expiry_field;
    faith_update(a.issuer, w, a.schema, c.id(), f, FieldValue{kSimToday + 4000}, a.rng);
    a.attempt([&] {
        auto req = backup.begin_update(a.dir, a.schema, c.id(), f, FieldValue{kSimToday + 5000}, a.rng);
        a.tally.note(req.encode());
        a.issuer.begin_update(req, a.rng);
    });
    a.issuer.publish_epoch();
    a.judge(a.show(c, a.phi()), a.phi());
}

using StrategyFn = void (*)(Arena&);

StrategyFn strategy_fn(std::string_view id) {
    static const std::map<std::string, StrategyFn, std::less<>> fns = {
        {"honest", honest},
        {"substituted-attributes", substituted_attributes},
        {"forged-doc", forged_doc},
        {"wid-mismatch", wid_mismatch},
        {"verdict-zero", verdict_zero},
        {"tampered-auth-signature", tampered_auth_signature},
        {"malicious-issuer", malicious_issuer},
        {"tampered-signature", tampered_signature},
        {"forged-signature", forged_signature},
        {"mutated-proof", mutated_proof},
        {"transcript-splicing", transcript_splicing},
        {"revoked-credential", revoked_credential},
        {"replayed-nonce", replayed_nonce},
        {"stale-epoch", stale_epoch},
        {"double-update", double_update},
    };
    return fns.at(std::string(id));
}

}  // namespace

ExperimentResult run_upriv_experiment(const PublicParams& pp, std::string_view strategy, std::uint64_t trials,
                                      std::uint64_t seed, unsigned threads) {
    const auto& st = find_strategy(strategy);
    const auto fn = strategy_fn(st.id);
    const Rng root = Rng::from_u64(seed);

    std::vector<Tally> tallies(trials);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t i; (i = next.fetch_add(1)) < trials;) {
            Arena arena(pp, i, root.fork("upriv/" + st.id, i), tallies[i]);
            fn(arena);
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(trials, 1))));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ExperimentResult res;
    res.strategy = st.id;
    res.expected = st.expected;
    res.trials = trials;
    std::vector<Bytes> digests;
    for (const auto& t : tallies) {
        res.attempts += t.attempts;
        res.accepts += t.accepts;
        for (const auto& [k, v] : t.outcomes) res.outcomes[k] += v;
        auto d = sha256(t.log);
        digests.emplace_back(d.begin(), d.end());
    }
    auto d = sha256(encode_parts("zkfaith/upriv/" + st.id, digests));
    res.digest.assign(d.begin(), d.end());
    res.pass = st.expected == Expect::reject ? res.accepts == 0 : (res.attempts > 0 && res.accepts == res.attempts);
    return res;
}

UnlinkabilityReport run_unlinkability_trial(const PublicParams& pp, std::uint64_t pairs, std::uint64_t seed) {
    Tally tally;
    Arena a(pp, 0, Rng::from_u64(seed), tally);
    Wallet w(a.pp, "wallet-u"), w2(a.pp, "wallet-v");
    Credential c = a.enroll(w);
    Credential other = a.enroll(w2);
    Criterion to_a = a.rich(), to_b = a.rich();
    to_b.verifier_id = "verifier-b";

    UnlinkabilityReport rep;
    rep.pairs = pairs;
    rep.same_shape = true;
    std::vector<Bytes> left, right;
    std::size_t shape = 0;
    auto flat = [&](const Presentation& p) {
        Bytes b;
        for (const auto& comp : proof_components(p)) b.insert(b.end(), comp.begin(), comp.end());
        auto n = p.encode().size();
        if (shape == 0) shape = n;
        if (n != shape) rep.same_shape = false;
        return b;
    };
    for (std::uint64_t i = 0; i < pairs; ++i) {
        auto pa = a.show(c, to_a);
        a.issuer.publish_epoch();
        auto pb = a.show(c, to_b);
        a.issuer.publish_epoch();
        auto ca = proof_components(pa), cb = proof_components(pb);
        std::set<Bytes> seen(ca.begin(), ca.end());
        for (const auto& x : cb) rep.collisions += seen.count(x);
        left.push_back(flat(pa));
        right.push_back(flat(pb));
    }
    if (pairs > 0) flat(a.show(other, to_a));  // another credential, same shape

    // Byte agreement within pairs against agreement between shifted pairs.
    std::uint64_t same = 0, same_shift = 0, total = 0;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const auto& x = left[i];
        const auto& y = right[i];
        const auto& z = right[(i + 1) % pairs];
        auto n = std::min({x.size(), y.size(), z.size()});
        for (std::size_t k = 0; k < n; ++k) {
            same += x[k] == y[k];
            same_shift += x[k] == z[k];
        }
        total += n;
    }
    if (total > 0) {
        rep.match_rate = double(same) / double(total);
        rep.chance_rate = double(same_shift) / double(total);
        double p = rep.chance_rate;
        double sd = std::sqrt(std::max(p * (1 - p), 1e-12) * 2.0 / double(total));
        rep.z = (rep.match_rate - rep.chance_rate) / sd;
    }
    rep.pass = rep.collisions == 0 && rep.same_shape && std::abs(rep.z) < 3.0;
    return rep;
}

}  // namespace zkfaith
