// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
//
//   acceptance [N ...]   run only the listed criteria

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "zkfaith/protocol.hpp"
#include "zkfaith/sim.hpp"
#include "zkfaith/wire.hpp"

using namespace zkfaith;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Scalar S(const PublicParams& pp, long long v) { return Scalar::from_int(pp.group(), v); }

template <class E>
long long ex(const E& e) {
    return static_cast<long long>(e.exponent().value().to_ulong());
}

long long md(long long v, long long q) { return ((v % q) + q) % q; }

long long inv_mod(long long a, long long q) {
    long long r = 1, e = q - 2;
    a = md(a, q);
    while (e) {
        if (e & 1) r = r * a % q;
        a = a * a % q;
        e >>= 1;
    }
    return r;
}

Bytes random_nonce(Rng& rng) {
    Bytes n(16);
    rng.fill(n);
    return n;
}

// ---- 1: closed-form exponent arithmetic on small mock groups

struct Tally {
    std::uint64_t checks = 0, bad = 0;
    std::string first;
    void eq(bool ok, const std::string& what) {
        ++checks;
        if (!ok && bad++ == 0) first = what;
    }
};

// One signing instance checked against the exponent formulas: com, the five
// signature parts, verification of the signed and of a swept vector,
// randomization, positional update and the epoch tag of the swept value.
struct OracleCase {
    long long q;
    long long x, y;
    std::vector<long long> z;
    const PublicParams& pp;
    IssuerSecretKey sk;
    IssuerPublicKey pk;

    OracleCase(const PublicParams& p, long long q_, long long x_, long long y_, std::vector<long long> z_)
        : q(q_), x(x_), y(y_), z(std::move(z_)), pp(p) {
        std::vector<Scalar> zs;
        for (auto v : z) zs.push_back(S(pp, v));
        std::tie(sk, pk) = cl_keygen_from(pp, S(pp, x), S(pp, y), zs);
    }

    long long com_of(const std::vector<long long>& M, long long m0) const {
        long long c = md(m0, q);
        for (std::size_t i = 0; i < M.size(); ++i) c = md(c + z[i] * M[i], q);
        return c;
    }

    AttributeVector vec(const std::vector<long long>& M) const {
        AttributeVector v;
        for (auto m : M) v.push_back(S(pp, m));
        return v;
    }

    void check(Tally& t, const std::vector<long long>& M, long long m0, long long alpha, long long r, long long r2,
               std::size_t j, long long v, long long fresh, std::uint64_t epoch) const {
        std::ostringstream tag;
        tag << "q=" << q << " l=" << M.size() << " j=" << j << " v=" << v;
        auto where = [&](const char* what) { return tag.str() + " " + what; };

        const long long com = com_of(M, m0);
        auto c = vc_commit_with(pk.vc(), vec(M), Opening{S(pp, m0)});
        t.eq(ex(c.c) == com, where("commitment"));

        auto sig = cl_issue_with_alpha(sk, pk, c, S(pp, alpha));
        t.eq(ex(sig.a) == md(alpha, q), where("sig.a"));
        t.eq(ex(sig.b) == md(y * alpha, q), where("sig.b"));
        for (std::size_t i = 0; i < M.size(); ++i) {
            t.eq(ex(sig.A[i]) == md(z[i] * alpha, q), where("sig.A"));
            t.eq(ex(sig.B[i]) == md(md(y * z[i], q) * alpha, q), where("sig.B"));
        }
        t.eq(ex(sig.c) == md(x * alpha + md(x * y, q) * md(alpha * com, q), q), where("sig.c"));
        t.eq(cl_structure_ok(pk, sig), where("structure"));
        t.eq(cl_verify(pk, vec(M), S(pp, m0), sig), where("verify"));

        // Swept vector against the same signature: the equation
        // c = x*alpha*(1 + y*com') holds iff com' = com.
        auto M2 = M;
        long long m02 = m0;
        if (j == 0) m02 = v;
        else M2[j - 1] = v;
        bool closed = com_of(M2, m02) == com;
        t.eq(cl_verify(pk, vec(M2), S(pp, m02), sig) == closed, where("verify swept"));

        auto rs = cl_randomize_with(sig, S(pp, r), S(pp, r2));
        t.eq(ex(rs.sig.a) == md(alpha * r, q), where("rand.a"));
        t.eq(ex(rs.sig.b) == md(md(y * alpha, q) * r, q), where("rand.b"));
        for (std::size_t i = 0; i < M.size(); ++i) {
            t.eq(ex(rs.sig.A[i]) == md(md(z[i] * alpha, q) * r, q), where("rand.A"));
            t.eq(ex(rs.sig.B[i]) == md(md(md(y * z[i], q) * alpha, q) * r, q), where("rand.B"));
        }
        t.eq(ex(rs.sig.c) == md(md(ex(sig.c) * r, q) * r2, q), where("rand.c"));
        t.eq(cl_structure_ok(pk, rs.sig), where("rand structure"));

        if (j >= 1) {
            auto up = vc_update_with(pk.vc(), c, S(pp, M[j - 1]), S(pp, v), j, Opening{S(pp, m0)},
                                     Opening{S(pp, fresh)});
            t.eq(ex(up.c) == md(com + z[j - 1] * (v - M[j - 1]) + (fresh - m0), q), where("update"));
            t.eq(ex(up.c) == com_of(M2, fresh), where("update recommit"));
        }

        long long d = md(v + static_cast<long long>(epoch), q);
        if (d == 0) {
            bool threw = false;
            try {
                epoch_tag(pp, S(pp, v), epoch);
            } catch (const DegenerateSerialError&) {
                threw = true;
            }
            t.eq(threw, where("degenerate tag"));
        } else {
            auto tg = epoch_tag(pp, S(pp, v), epoch);
            t.eq(ex(tg) == inv_mod(d, q), where("tag"));
            // e(tag, (s + e) h) = e(g, h)
            t.eq(pair(tg, pp.h * S(pp, d)) == pair(pp.g, pp.h), where("tag pairing"));
            t.eq(ex(pair(tg, pp.h * S(pp, d))) == 1, where("tag pairing exponent"));
        }
    }
};

// Presentation and opening equations in closed form for one random instance.
void check_proofs(Tally& t, const OracleCase& oc, Rng& rng, const std::vector<long long>& M, long long m0,
                  long long alpha, long long r, long long r2) {
    const auto& pp = oc.pp;
    const long long q = oc.q;
    std::ostringstream tag;
    tag << "q=" << q << " l=" << M.size() << " proofs";
    Bytes ctx = to_bytes("acceptance/oracle");

    auto c = vc_commit_with(oc.pk.vc(), oc.vec(M), Opening{S(pp, m0)});
    auto sig = cl_issue_with_alpha(oc.sk, oc.pk, c, S(pp, alpha));
    auto rs = cl_randomize_with(sig, S(pp, r), S(pp, r2));

    // rho * c^ = x * (a~ + m0 b~ + sum m_i B~_i) with rho = r'^-1
    long long inner = md(ex(rs.sig.a) + m0 * ex(rs.sig.b), q);
    for (std::size_t i = 0; i < M.size(); ++i) inner = md(inner + M[i] * ex(rs.sig.B[i]), q);
    t.eq(md(inv_mod(r2, q) * ex(rs.sig.c), q) == md(oc.x * inner, q), tag.str() + " witness relation");

    PresentationRequest req;
    std::map<std::uint32_t, Scalar> disclosed;
    for (std::uint32_t i = 1; i <= M.size(); ++i) {
        if (rng.uniform(2)) {
            req.disclose.insert(i);
            disclosed.emplace(i, S(pp, M[i - 1]));
        }
    }
    auto proof = prove_presentation_with(oc.pk, rs, oc.vec(M), S(pp, m0), req, ctx, rng);
    // c^ is the identity when 1 + y*com = 0, and the verifier refuses that
    bool expect = md(1 + oc.y * oc.com_of(M, m0), q) != 0;
    t.eq(verify_presentation(oc.pk, proof, disclosed, {}, {}, ctx) == expect, tag.str() + " presentation");

    // Opening proof: s0*g + sum s_i Z_i = T + c*com, checked for a random
    // challenge and for the one that closes it.
    auto vc = oc.pk.vc();
    auto op = prove_opening(vc, c, oc.vec(M), Opening{S(pp, m0)}, ctx, rng);
    long long lhs = md(static_cast<long long>(op.s[0].to_ulong()), q);
    for (std::size_t i = 0; i < M.size(); ++i) lhs = md(lhs + static_cast<long long>(op.s[i + 1].to_ulong()) * oc.z[i], q);
    long long T = ex(op.T), cm = ex(c.c);
    long long ch = static_cast<long long>(rng.uniform(static_cast<std::uint64_t>(q)));
    t.eq(opening_equation_holds(vc, c, op, S(pp, ch)) == (lhs == md(T + ch * cm, q)), tag.str() + " opening random c");
    if (cm != 0) {
        long long closing = md((lhs - T) * inv_mod(cm, q), q);
        t.eq(opening_equation_holds(vc, c, op, S(pp, closing)), tag.str() + " opening closing c");
    }
}

Verdict criterion_mock_oracle() {
    auto t0 = Clock::now();
    Tally t;
    Rng root = Rng::from_u64(0xacc1);
    std::uint64_t exhaustive = 0, randomized = 0;
    for (long long q : {101LL, 1009LL}) {
        auto pp = setup_mock(mpz_class(static_cast<long>(q)));
        Rng rng = root.fork("q", static_cast<std::uint64_t>(q));
        auto draw = [&](bool nonzero) {
            return static_cast<long long>(nonzero ? 1 + rng.uniform(q - 1) : rng.uniform(q));
        };

        // pairing bilinearity: full table at 101, full rows at 1009
        for (long long a = 0; a < q; ++a) {
            for (int k = 0; k < (q == 101 ? 101 : 8); ++k) {
                long long b = q == 101 ? k : draw(false);
                t.eq(ex(pair(G1::from_exponent(S(pp, a)), G2::from_exponent(S(pp, b)))) == md(a * b, q), "pairing");
            }
        }

        // every value at every coordinate (m0 and m_1..m_l), l <= 3
        for (std::size_t l = 1; l <= 3; ++l) {
            for (int key = 0; key < 3; ++key) {
                std::vector<long long> z;
                for (std::size_t i = 0; i < l; ++i) z.push_back(draw(true));
                OracleCase oc(pp, q, draw(true), draw(true), z);
                std::vector<long long> M;
                for (std::size_t i = 0; i < l; ++i) M.push_back(draw(false));
                long long m0 = draw(false), alpha = draw(true);
                for (std::size_t j = 0; j <= l; ++j) {
                    for (long long v = 0; v < q; ++v) {
                        oc.check(t, M, m0, alpha, 1 + md(v, q - 1), draw(true), j, v, draw(false),
                                 static_cast<std::uint64_t>(1 + j));
                        ++exhaustive;
                    }
                }
            }
        }
        // the whole (m1, m2) plane for one key at q = 101
        if (q == 101) {
            OracleCase oc(pp, q, draw(true), draw(true), {draw(true), draw(true)});
            for (long long a = 0; a < q; ++a) {
                for (long long b = 0; b < q; ++b) {
                    oc.check(t, {a, b}, draw(false), draw(true), draw(true), draw(true), 1 + (a + b) % 2, draw(false),
                             draw(false), static_cast<std::uint64_t>(a));
                    ++exhaustive;
                }
            }
        }
        // random instances up to l = 8, with the proof equations
        for (std::size_t l = 1; l <= 8; ++l) {
            for (int n = 0; n < 150; ++n) {
                std::vector<long long> z, M;
                for (std::size_t i = 0; i < l; ++i) {
                    z.push_back(draw(true));
                    M.push_back(draw(false));
                }
                OracleCase oc(pp, q, draw(true), draw(true), z);
                long long m0 = draw(false), alpha = draw(true), r = draw(true), r2 = draw(true);
                oc.check(t, M, m0, alpha, r, r2, rng.uniform(l + 1), draw(false), draw(false), rng.uniform(50));
                check_proofs(t, oc, rng, M, m0, alpha, r, r2);
                ++randomized;
            }
        }
    }
    double secs = seconds_since(t0);
    std::ostringstream d;
    d << "q={101,1009} exhaustive_cases=" << exhaustive << " random_cases=" << randomized << " checks=" << t.checks
      << " mismatches=" << t.bad;
    if (t.bad) d << " first=\"" << t.first << "\"";
    d << " time=" << secs << "s limit=10s";
    return {t.bad == 0 && secs < 10.0, d.str()};
}

// ---- 2: end-to-end liveness

Verdict criterion_liveness() {
    auto t0 = Clock::now();
    const auto& schemas = SchemaRegistry::builtin();
    int runs = 0, accepted = 0;
    std::string failure;
    for (Backend backend : {Backend::mock, Backend::curve}) {
        auto pp = setup(SecurityLevel::standard, backend);
        Rng rng = Rng::from_u64(0xacc2).fork(to_string(backend), 0);
        auto authority = AuthorityKey::generate(rng);
        auto issuer = Issuer::create(pp, schemas, authority.public_key, rng);
        auto dir = issuer.directory();
        Verifier verifier(dir, schemas, "acceptance-verifier");
        for (const auto& id : schemas.ids()) {
            const auto& schema = schemas.get(id);
            std::string wid = "wallet-" + id;
            Wallet wallet(pp, wid);
            auto doc = sample_document(schema, wid, rng);
            auto R = faith_auth(authority, schemas, doc, kSimToday);
            auto Q = faith_ask(wallet, dir, schema, doc, R, rng);
            const auto& cred = faith_issue(issuer, wallet, R, Q, rng);
            for (const auto& phi : sample_criteria(schema, "acceptance-verifier")) {
                ++runs;
                auto pres = faith_show(dir, schema, cred, phi, *issuer.registry().current(), random_nonce(rng), rng);
                auto out = verifier.verify(pres, phi, *issuer.registry().current());
                if (out.accepted) ++accepted;
                else if (failure.empty()) failure = id + "/" + std::string(to_string(backend)) + ": " + out.detail;
            }
        }
    }
    double secs = seconds_since(t0);
    std::ostringstream d;
    d << "schemas=3 criteria=3 backends=2 accepted=" << accepted << "/" << runs << " time=" << secs << "s limit=60s";
    if (!failure.empty()) d << " first=\"" << failure << "\"";
    return {runs == 18 && accepted == runs && secs < 60.0, d.str()};
}

// ---- 3: forgery suite

Verdict criterion_forgery() {
    auto t0 = Clock::now();
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    auto mock = setup(SecurityLevel::standard, Backend::mock);
    auto curve = setup(SecurityLevel::standard, Backend::curve);
    const std::set<std::string> required = {"forged-doc",         "wid-mismatch",   "tampered-signature",
                                            "mutated-proof",      "transcript-splicing", "revoked-credential",
                                            "replayed-nonce",     "stale-epoch"};
    bool ok = true;
    std::uint64_t attempts = 0, accepts = 0, curve_attempts = 0, curve_accepts = 0;
    std::set<std::string> covered;
    std::string bad;
    for (const auto& s : strategies()) {
        auto r = run_upriv_experiment(mock, s.id, 100, 0xacc3, threads);
        if (!r.pass && bad.empty()) bad = r.report_line();
        ok &= r.pass && r.trials >= 100;
        if (s.expected == Expect::reject) {
            attempts += r.attempts;
            accepts += r.accepts;
            if (required.contains(s.id)) covered.insert(s.id);
            // spot check on the production curve
            auto c = run_upriv_experiment(curve, s.id, s.id == "mutated-proof" ? 1 : 3, 0xacc3, threads);
            if (!c.pass && bad.empty()) bad = "curve " + c.report_line();
            ok &= c.pass;
            curve_attempts += c.attempts;
            curve_accepts += c.accepts;
        }
    }
    ok &= covered == required && accepts == 0 && curve_accepts == 0;
    std::ostringstream d;
    d << "mock: 100 trials/strategy, reject-strategies attempts=" << attempts << " accepts=" << accepts
      << "; curve spot check attempts=" << curve_attempts << " accepts=" << curve_accepts
      << "; required strategies covered=" << covered.size() << "/" << required.size() << " time=" << seconds_since(t0)
      << "s";
    if (!bad.empty()) d << " first=\"" << bad << "\"";
    return {ok, d.str()};
}

// ---- 4: unlinkability on the production curve

Verdict criterion_unlinkability() {
    auto t0 = Clock::now();
    auto pp = setup(SecurityLevel::standard, Backend::curve);
    auto rep = run_unlinkability_trial(pp, 1000, 0xacc4);
    std::ostringstream d;
    d << "curve pairs=" << rep.pairs << " shared_components=" << rep.collisions << " same_shape=" << rep.same_shape
      << " match_rate=" << rep.match_rate << " chance_rate=" << rep.chance_rate << " z=" << rep.z
      << " bound=|z|<3 seed=0xacc4 time=" << seconds_since(t0) << "s";
    return {rep.pass && rep.pairs >= 1000 && rep.collisions == 0, d.str()};
}

// ---- 5: four-bit range proofs against enumeration

Verdict criterion_range() {
    auto t0 = Clock::now();
    std::uint64_t cases = 0, mismatch = 0, satisfiable = 0, unsatisfiable = 0, cross = 0;
    Bytes ctx = to_bytes("acceptance/range");
    for (const auto& pp : {setup_mock(1009), setup(SecurityLevel::standard, Backend::mock)}) {
        Rng rng = Rng::from_u64(0xacc5);
        for (RangeKind kind : {RangeKind::at_least, RangeKind::at_most}) {
            for (long long th : {0LL, 17LL, 500LL, -300LL}) {
                RangePredicate pred{0, kind, th, 4};
                for (long long v = th - 48; v <= th + 48; ++v) {
                    long long diff = kind == RangeKind::at_least ? v - th : th - v;
                    bool expect = diff >= 0 && diff < 16;  // the enumeration oracle
                    bool got = false;
                    Scalar t = Scalar::random(pp.group(), rng);
                    try {
                        auto p = prove_range(pp, S(pp, v), t, pred, ctx, rng);
                        got = verify_range(pp, p, pred, ctx);
                        // the same proof under every other threshold in the
                        // window accepts exactly where the enumeration says
                        for (long long th2 = th - 20; th2 <= th + 20; th2 += 5) {
                            if (th2 == th) continue;
                            RangePredicate other{0, kind, th2, 4};
                            ++cross;
                            bool proof_ok = verify_range(pp, p, other, ctx);
                            if (proof_ok) ++mismatch;  // threshold is part of the statement
                        }
                    } catch (const CannotSatisfyError&) {
                        got = false;
                    } catch (const CapacityError&) {
                        got = false;
                    }
                    ++cases;
                    (expect ? satisfiable : unsatisfiable) += 1;
                    if (got != expect) ++mismatch;
                }
            }
        }
    }
    std::ostringstream d;
    d << "n_bits=4 cases=" << cases << " satisfiable=" << satisfiable << " unsatisfiable=" << unsatisfiable
      << " cross_threshold_checks=" << cross << " mismatches=" << mismatch << " time=" << seconds_since(t0) << "s";
    // 16 satisfiable values per (group, kind, threshold)
    return {mismatch == 0 && satisfiable == 2 * 2 * 4 * 16, d.str()};
}

// ---- 6: update semantics

// A field present in `doc` and a different valid value for it.
std::pair<std::string, FieldValue> pick_change(const Schema& schema, const Document& doc, Rng& rng) {
    std::vector<std::string> present;
    for (const auto& [name, v] : doc.fields) present.push_back(name);
    std::string field = present[rng.uniform(present.size())];
    for (;;) {
        auto other = sample_document(schema, doc.wid, rng);
        auto it = other.fields.find(field);
        if (it != other.fields.end() && it->second != doc.fields.at(field)) return {field, it->second};
    }
}

Verdict criterion_update() {
    auto t0 = Clock::now();
    auto pp = setup(SecurityLevel::standard, Backend::curve);
    const auto& schemas = SchemaRegistry::builtin();
    Rng rng = Rng::from_u64(0xacc6);
    auto authority = AuthorityKey::generate(rng);
    auto issuer = Issuer::create(pp, schemas, authority.public_key, rng);
    auto dir = issuer.directory();
    Verifier verifier(dir, schemas, "acceptance-verifier");
    auto ids = schemas.ids();
    int good = 0;
    std::uint64_t new_accepts = 0, old_rejects = 0, shows = 0;
    std::string failure;
    for (int trial = 0; trial < 20; ++trial) {
        const auto& schema = schemas.get(ids[rng.uniform(ids.size())]);
        std::string wid = "wallet-" + std::to_string(trial);
        Wallet wallet(pp, wid);
        auto doc = sample_document(schema, wid, rng);
        auto R = faith_auth(authority, schemas, doc, kSimToday);
        auto Q = faith_ask(wallet, dir, schema, doc, R, rng);
        Credential old = faith_issue(issuer, wallet, R, Q, rng);

        auto [field, value] = pick_change(schema, doc, rng);
        Credential fresh = faith_update(issuer, wallet, schema, old.id(), field, value, rng);
        issuer.publish_epoch();
        const auto& epoch = *issuer.registry().current();

        bool ok = true;
        auto j = schema.position(field);
        for (std::uint32_t p = 1; p <= schema.length(); ++p) {
            bool same = fresh.M[p - 1] == old.M[p - 1];
            ok &= (p == j || p == kSerialPosition) ? !same : same;
        }
        ok &= fresh.M[j - 1] == field_scalar(pp, schema.field(field), value);
        for (const auto& phi : sample_criteria(schema, "acceptance-verifier")) {
            shows += 2;
            auto n = verifier.verify(faith_show(dir, schema, fresh, phi, epoch, random_nonce(rng), rng), phi, epoch);
            auto o = verifier.verify(faith_show(dir, schema, old, phi, epoch, random_nonce(rng), rng), phi, epoch);
            new_accepts += n.accepted;
            old_rejects += !o.accepted && o.reason == Reason::revoked;
            ok &= n.accepted && !o.accepted && o.reason == Reason::revoked;
            if (!ok && failure.empty()) {
                failure = "trial " + std::to_string(trial) + " field " + field + ": new=" + n.detail +
                          " old=" + (o.accepted ? std::string("accepted") : o.detail);
            }
        }
        good += ok;
    }
    std::ostringstream d;
    d << "curve trials=20 passed=" << good << " new_accepts=" << new_accepts << "/" << shows / 2
      << " old_revoked=" << old_rejects << "/" << shows / 2 << " time=" << seconds_since(t0) << "s";
    if (!failure.empty()) d << " first=\"" << failure << "\"";
    return {good == 20, d.str()};
}

// ---- 7: serialization

struct Artifact {
    std::string type;
    Bytes bytes;
    std::function<Bytes(std::span<const std::uint8_t>)> reencode;
};

std::vector<Artifact> artifacts_of_one_run(const PublicParams& pp, Rng& rng, std::uint64_t i) {
    const auto& schemas = SchemaRegistry::builtin();
    const auto& ctx = pp.group();
    auto ids = schemas.ids();
    const auto& schema = schemas.get(ids[i % ids.size()]);
    std::vector<Artifact> out;
    auto add = [&](std::string type, Bytes b, std::function<Bytes(std::span<const std::uint8_t>)> f) {
        out.push_back({std::move(type), std::move(b), std::move(f)});
    };

    add("params", pp.encode(), [](auto b) { return PublicParams::decode(b).encode(); });

    std::size_t l = 1 + rng.uniform(8);
    auto [sk, pk] = cl_keygen(pp, l, rng);
    AttributeVector M;
    for (std::size_t k = 0; k < l; ++k) M.push_back(Scalar::random(ctx, rng));
    auto [com, op] = vc_commit(pk.vc(), M, rng);
    auto sig = cl_issue_on_commitment(sk, pk, com, rng);
    Bytes bctx = to_bytes("acceptance/serial");
    add("commitment", com.encode(), [&ctx](auto b) { return Commitment::decode(ctx, b).encode(); });
    add("position-proof", vc_open(pk.vc(), com, M, op, 1 + rng.uniform(l), rng).encode(),
        [&ctx](auto b) { return PositionProof::decode(ctx, b).encode(); });
    add("cl-secret-key", sk.encode(), [&ctx](auto b) { return IssuerSecretKey::decode(ctx, b).encode(); });
    add("cl-public-key", pk.encode(), [pp](auto b) { return IssuerPublicKey::decode(pp, b).encode(); });
    add("signature", sig.encode(), [&ctx](auto b) { return Signature::decode(ctx, b).encode(); });
    add("opening-proof", prove_opening(pk.vc(), com, M, op, bctx, rng).encode(),
        [&ctx](auto b) { return ProofOfOpening::decode(ctx, b).encode(); });
    RangePredicate rp{0, RangeKind::at_least, static_cast<std::int64_t>(rng.uniform(1000)), 12};
    add("range-proof",
        prove_range(pp, S(pp, rp.threshold + static_cast<long long>(rng.uniform(4096))), Scalar::random(ctx, rng), rp,
                    bctx, rng)
            .encode(),
        [&ctx](auto b) { return RangeProof::decode(ctx, b).encode(); });

    auto authority = AuthorityKey::generate(rng);
    auto issuer = Issuer::create(pp, schemas, authority.public_key, rng);
    auto dir = issuer.directory();
    std::string wid = "wallet-" + std::to_string(i);
    Wallet wallet(pp, wid);
    auto doc = sample_document(schema, wid, rng);
    auto R = faith_auth(authority, schemas, doc, kSimToday);
    auto Q = faith_ask(wallet, dir, schema, doc, R, rng);
    auto offer = issuer.begin_issue(R, Q, rng);
    auto sc = wallet.accept_offer(dir, offer, rng);
    auto resp = issuer.finish(sc, rng);
    Credential cred = wallet.complete(dir, resp);
    if (i % 2) {
        issuer.revoke(Scalar::random(ctx, rng));
        issuer.publish_epoch();
    }
    const auto& epoch = *issuer.registry().current();
    auto crits = sample_criteria(schema, "acceptance-verifier");
    const auto& phi = crits[i % crits.size()];
    auto pres = faith_show(dir, schema, cred, phi, epoch, random_nonce(rng), rng);
    Verifier verifier(dir, schemas, "acceptance-verifier");
    verifier.verify(pres, phi, epoch);
    auto [field, value] = pick_change(schema, doc, rng);
    auto upd = wallet.begin_update(dir, schema, cred.id(), field, value, rng);

    add("update-link", sc.link.encode(), [&ctx](auto b) { return UpdateLinkProof::decode(ctx, b).encode(); });
    add("registry", issuer.registry().encode(), [pp](auto b) { return RevocationRegistry::decode(pp, b).encode(); });
    add("epoch-list", epoch.encode(), [&ctx](auto b) { return EpochList::decode(ctx, b).encode(); });
    add("non-membership", pres.nm.encode(), [&ctx](auto b) { return NonMembershipProof::decode(ctx, b).encode(); });
    add("presentation-proof", pres.proof.encode(),
        [&ctx](auto b) { return PresentationProof::decode(ctx, b).encode(); });
    add("authority-key", authority.encode(), [](auto b) { return AuthorityKey::decode(b).encode(); });
    add("authority-public-key", authority.encode_public(), [](auto b) {
        AuthorityKey k;
        k.public_key = AuthorityKey::decode_public(b);
        return k.encode_public();
    });
    add("auth-response", R.encode(), [](auto b) { return AuthResponse::decode(b).encode(); });
    add("directory", dir.encode(), [pp](auto b) { return IssuerDirectory::decode(pp, b).encode(); });
    add("issue-query", Q.encode(), [&ctx](auto b) { return IssueQuery::decode(ctx, b).encode(); });
    add("issue-request", IssueRequest{R, Q}.encode(), [&ctx](auto b) { return IssueRequest::decode(ctx, b).encode(); });
    add("serial-offer", offer.encode(), [&ctx](auto b) { return SerialOffer::decode(ctx, b).encode(); });
    add("serial-commit", sc.encode(), [&ctx](auto b) { return SerialCommit::decode(ctx, b).encode(); });
    add("issue-response", resp.encode(), [&ctx](auto b) { return IssueResponse::decode(ctx, b).encode(); });
    add("update-request", upd.encode(), [&ctx](auto b) { return UpdateRequest::decode(ctx, b).encode(); });
    add("credential", cred.encode(), [&ctx](auto b) { return Credential::decode(ctx, b).encode(); });
    add("presentation", pres.encode(), [&ctx](auto b) { return Presentation::decode(ctx, b).encode(); });
    add("wallet", wallet.encode(), [pp](auto b) { return Wallet::decode(pp, b).encode(); });
    add("issuer", issuer.encode(), [pp](auto b) { return Issuer::decode(pp, b).encode(); });
    add("verifier", verifier.encode(),
        [dir, &schemas](auto b) { return Verifier::decode(dir, schemas, b).encode(); });
    return out;
}

Verdict criterion_serialization() {
    auto t0 = Clock::now();
    auto pp = setup(SecurityLevel::standard, Backend::mock);
    Rng root = Rng::from_u64(0xacc7);
    std::map<std::string, std::uint64_t> per_type;
    std::uint64_t roundtrip_bad = 0, text_flips = 0, text_missed = 0, bin_mutations = 0, bin_missed = 0;
    std::string first;
    auto note = [&](const std::string& what) {
        if (first.empty()) first = what;
    };
    for (std::uint64_t i = 0; i < 1000; ++i) {
        Rng rng = root.fork("instance", i);
        for (auto& a : artifacts_of_one_run(pp, rng, i)) {
            ++per_type[a.type];
            // binary: canonical round trip
            Bytes again;
            try {
                again = a.reencode(a.bytes);
            } catch (const Error& e) {
                note(a.type + " decode: " + e.what());
            }
            if (again != a.bytes) {
                ++roundtrip_bad;
                note(a.type + " round trip");
            }
            // envelope: round trip and every byte flip rejected
            auto env = Envelope::wrap(a.type, a.bytes);
            auto text = env.to_json();
            auto back = Envelope::from_json(text);
            if (back.payload != a.bytes || back.to_json() != text) {
                ++roundtrip_bad;
                note(a.type + " envelope round trip");
            }
            for (int k = 0; k < 4; ++k) {
                auto t = text;
                std::size_t at = rng.uniform(t.size());
                t[at] = static_cast<char>(t[at] ^ (1 + rng.uniform(255)));
                ++text_flips;
                try {
                    Envelope::from_json(t);
                    ++text_missed;
                    note(a.type + " text flip at " + std::to_string(at));
                } catch (const Error&) {
                }
            }
            // binary: a flipped, cut or extended encoding never decodes back
            // to the same canonical bytes
            for (int k = 0; k < 4; ++k) {
                Bytes b = a.bytes;
                switch (k) {
                    case 0:
                    case 1: {
                        std::size_t at = rng.uniform(b.size());
                        b[at] ^= static_cast<std::uint8_t>(1 + rng.uniform(255));
                        break;
                    }
                    case 2: b.resize(rng.uniform(b.size())); break;
                    default: b.push_back(static_cast<std::uint8_t>(rng.uniform(256)));
                }
                ++bin_mutations;
                try {
                    if (a.reencode(b) == a.bytes || a.reencode(b) != b) {
                        ++bin_missed;
                        note(a.type + " binary mutation " + std::to_string(k));
                    }
                } catch (const Error&) {
                }
            }
        }
    }
    std::set<std::string> want;
    for (const auto& t : message_types()) want.insert(std::string(t.name));
    std::set<std::string> have;
    std::uint64_t min_count = ~0ull;
    for (const auto& [t, n] : per_type) {
        have.insert(t);
        min_count = std::min(min_count, n);
    }
    std::ostringstream d;
    d << "types=" << have.size() << "/" << want.size() << " instances_per_type>=" << min_count
      << " roundtrip_failures=" << roundtrip_bad << " text_flips=" << text_flips << " undetected=" << text_missed
      << " binary_mutations=" << bin_mutations << " accepted_as_canonical=" << bin_missed
      << " time=" << seconds_since(t0) << "s";
    if (!first.empty()) d << " first=\"" << first << "\"";
    return {have == want && min_count >= 1000 && roundtrip_bad == 0 && text_missed == 0 && bin_missed == 0, d.str()};
}

// ---- 8: performance at l = 16 on the curve

Verdict criterion_performance() {
    auto pp = setup(SecurityLevel::standard, Backend::curve);
    Schema wide;
    wide.id = "wide";
    for (int k = 0; k < 14; ++k) wide.fields.push_back({"f" + std::to_string(k), FieldType::text, true, false});
    wide.fields[13] = {"born", FieldType::date, true, true};
    SchemaRegistry reg;
    reg.add(wide);
    Rng rng = Rng::from_u64(0xacc8);
    auto authority = AuthorityKey::generate(rng);
    auto issuer = Issuer::create(pp, reg, authority.public_key, rng);
    auto dir = issuer.directory();
    Verifier verifier(dir, reg, "acceptance-verifier");
    Criterion phi{"acceptance-verifier", "wide", {"f0", "f1"}, {Criterion::min_age("born", 18, kSimToday)}};

    std::vector<double> times;
    bool accepted = true;
    for (int run = 0; run < 5; ++run) {
        Document doc;
        doc.schema_id = "wide";
        doc.wid = "wallet-" + std::to_string(run);
        for (int k = 0; k < 13; ++k) doc.fields["f" + std::to_string(k)] = std::string("value ") + std::to_string(k);
        doc.fields["born"] = std::int64_t{7305};
        Wallet wallet(pp, doc.wid);

        auto t0 = Clock::now();
        auto R = faith_auth(authority, reg, doc, kSimToday);
        auto Q = faith_ask(wallet, dir, wide, doc, R, rng);
        const auto& cred = faith_issue(issuer, wallet, R, Q, rng);
        auto pres = faith_show(dir, wide, cred, phi, *issuer.registry().current(), random_nonce(rng), rng);
        auto out = verifier.verify(pres, phi, *issuer.registry().current());
        times.push_back(seconds_since(t0));
        accepted &= out.accepted && cred.M.size() == 16;
    }
    auto worst = *std::max_element(times.begin(), times.end());
    auto sorted = times;
    std::sort(sorted.begin(), sorted.end());
    std::ostringstream d;
    d << "curve l=16 issue+show+verify runs=5 median=" << sorted[2] << "s worst=" << worst
      << "s limit=1s threads=1 accepted=" << accepted;
    return {accepted && worst < 1.0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, Verdict (*)()>> criteria = {
        {"mock-oracle", criterion_mock_oracle},   {"liveness", criterion_liveness},
        {"forgery-suite", criterion_forgery},     {"unlinkability", criterion_unlinkability},
        {"range-brute-force", criterion_range},   {"update-semantics", criterion_update},
        {"serialization", criterion_serialization}, {"performance", criterion_performance},
    };
    std::set<int> only;
    for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
    int failed = 0;
    for (std::size_t n = 0; n < criteria.size(); ++n) {
        int id = static_cast<int>(n + 1);
        if (!only.empty() && !only.contains(id)) continue;
        Verdict v;
        try {
            v = criteria[n].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::cout << "criterion " << id << " " << criteria[n].first << ": " << (v.pass ? "PASS" : "FAIL") << "  "
                  << v.detail << std::endl;
    }
    return failed ? 1 : 0;
}
