#include <set>

#include "support.hpp"
#include "zkfaith/proofs.hpp"

using namespace zkfaith;
using test::ex;
using test::S;

namespace {

struct Issued {
    IssuerSecretKey sk;
    IssuerPublicKey pk;
    AttributeVector M;
    Opening o;
    Commitment com;
    Signature sig;
};

Issued issue(const PublicParams& pp, const AttributeVector& M, Rng& rng) {
    Issued t;
    std::tie(t.sk, t.pk) = cl_keygen(pp, M.size(), rng);
    t.M = M;
    std::tie(t.com, t.o) = vc_commit(t.pk.vc(), M, rng);
    t.sig = cl_issue_on_commitment(t.sk, t.pk, t.com, rng);
    return t;
}

std::map<std::uint32_t, Scalar> disclosed_of(const AttributeVector& M, const std::set<std::uint32_t>& d) {
    std::map<std::uint32_t, Scalar> out;
    for (auto p : d) out.emplace(p, M[p - 1]);
    return out;
}

const Bytes kCtxA = to_bytes("verifier-A|nonce-1");
const Bytes kCtxB = to_bytes("verifier-B|nonce-1");

}  // namespace

// ---- opening

class OpeningBoth : public test::BackendTest {};

TEST_P(OpeningBoth, CompletenessAndBinding) {
    Rng rng = Rng::from_u64(30);
    for (int t = 0; t < trials(200, 30); ++t) {
        std::size_t l = 1 + rng.uniform(8);
        auto v = vc_setup(pp, l);
        AttributeVector M;
        for (std::size_t i = 0; i < l; ++i) M.push_back(Scalar::random(pp.group(), rng));
        auto [com, o] = vc_commit(v, M, rng);
        auto p = prove_opening(v, com, M, o, kCtxA, rng);
        ASSERT_TRUE(verify_opening(v, com, p, kCtxA));
        ASSERT_FALSE(verify_opening(v, com, p, kCtxB));
    }
}

TEST_P(OpeningBoth, FreshTranscriptsAndMutations) {
    Rng rng = Rng::from_u64(31);
    auto v = vc_setup(pp, 3);
    AttributeVector M{S(pp, 1), S(pp, 2), S(pp, 3)};
    auto [com, o] = vc_commit(v, M, rng);
    auto p1 = prove_opening(v, com, M, o, kCtxA, rng);
    auto p2 = prove_opening(v, com, M, o, kCtxA, rng);
    EXPECT_NE(p1.T, p2.T);
    for (std::size_t k = 0; k < p1.s.size(); ++k) {
        auto bad = p1;
        bad.s[k] += S(pp, 1);
        EXPECT_FALSE(verify_opening(v, com, bad, kCtxA));
    }
    auto bad = p1;
    bad.T += pp.g;
    EXPECT_FALSE(verify_opening(v, com, bad, kCtxA));
    EXPECT_THROW(prove_opening(v, com, {S(pp, 1)}, o, kCtxA, rng), InvalidLengthError);
    EXPECT_EQ(ProofOfOpening::decode(pp.group(), p1.encode()).encode(), p1.encode());
}

TEST_P(OpeningBoth, SimulatorMatchesShape) {
    Rng rng = Rng::from_u64(32);
    auto v = vc_setup(pp, 3);
    AttributeVector M{S(pp, 1), S(pp, 2), S(pp, 3)};
    auto [com, o] = vc_commit(v, M, rng);
    auto honest = prove_opening(v, com, M, o, kCtxA, rng);
    for (int t = 0; t < trials(1000, 50); ++t) {
        Scalar c = Scalar::random(pp.group(), rng);
        auto sim = simulate_opening(v, com, c, rng);
        ASSERT_TRUE(opening_equation_holds(v, com, sim, c));
        ASSERT_EQ(sim.encode().size(), honest.encode().size());
        if (!is_curve() && pp.q() < 1000) continue;
        ASSERT_NE(sim.T, honest.T);
        for (std::size_t k = 0; k < sim.s.size(); ++k) ASSERT_NE(sim.s[k], honest.s[k]);
    }
}

TEST(Opening, MockRecomputation) {
    // l = 1, g = 1, Z_1 = 7, M = (2), m0 = 4: s*(1,7) = T + c*18 in exponents.
    auto pp = setup_mock(101);
    auto v = VCParams::from_bases(pp, {pp.g * S(pp, 7)});
    auto com = vc_commit_with(v, {S(pp, 2)}, Opening{S(pp, 4)});
    Rng rng = Rng::from_u64(33);
    auto p = prove_opening(v, com, {S(pp, 2)}, Opening{S(pp, 4)}, kCtxA, rng);
    ASSERT_TRUE(verify_opening(v, com, p, kCtxA));
    Transcript t(pp, "zkfaith/proof/opening");
    t.append("g", v.g).append("Z", v.Z[0]).append("com", com.c).append("T", p.T).append("context", kCtxA);
    long long c = static_cast<long long>(t.challenge().to_ulong());
    long long lhs = (static_cast<long long>(p.s[0].to_ulong()) + 7 * static_cast<long long>(p.s[1].to_ulong())) % 101;
    long long rhs = (static_cast<long long>(ex(p.T)) + c * 18) % 101;
    EXPECT_EQ(lhs, rhs);
}

ZK_BOTH_BACKENDS(OpeningBoth);

// ---- range

TEST(Range, BoundaryCases) {
    auto pp = setup_mock(1009);
    Rng rng = Rng::from_u64(40);
    RangePredicate pred{0, RangeKind::at_least, 100, 4};
    Scalar t = S(pp, 17);
    auto proof = prove_range(pp, S(pp, 100), t, pred, kCtxA, rng);
    EXPECT_TRUE(verify_range(pp, proof, pred, kCtxA));
    EXPECT_FALSE(verify_range(pp, proof, pred, kCtxB));
    EXPECT_THROW(prove_range(pp, S(pp, 99), t, pred, kCtxA, rng), CannotSatisfyError);
    EXPECT_THROW(prove_range(pp, S(pp, 116), t, pred, kCtxA, rng), CapacityError);
    // the honest proof for 100 re-pointed at a commitment to 99
    auto forged = proof;
    forged.comp.C = pedersen(pp, S(pp, 99), t);
    EXPECT_FALSE(verify_range(pp, forged, pred, kCtxA));
    EXPECT_THROW(prove_range(pp, S(pp, 100), t, RangePredicate{0, RangeKind::at_least, 100, 10}, kCtxA, rng),
                 CapacityError);
    EXPECT_THROW(range_difference(pp, S(pp, 5), RangeKind::at_least, 0, 0), CapacityError);
}

TEST(Range, AtMost) {
    auto pp = setup_mock(1009);
    Rng rng = Rng::from_u64(41);
    RangePredicate pred{0, RangeKind::at_most, 50, 4};
    for (int v = 30; v <= 60; ++v) {
        if (v >= 35 && v <= 50) {
            auto p = prove_range(pp, S(pp, v), S(pp, 3), pred, kCtxA, rng);
            EXPECT_TRUE(verify_range(pp, p, pred, kCtxA)) << v;
        } else if (v > 50) {
            EXPECT_THROW(prove_range(pp, S(pp, v), S(pp, 3), pred, kCtxA, rng), CannotSatisfyError) << v;
        } else {
            EXPECT_THROW(prove_range(pp, S(pp, v), S(pp, 3), pred, kCtxA, rng), CapacityError) << v;
        }
    }
}

TEST(Range, NegativeValuesAsSignedIntegers) {
    auto pp = test::curve();
    Rng rng = Rng::from_u64(42);
    RangePredicate pred{0, RangeKind::at_least, -8000, 14};
    auto p = prove_range(pp, S(pp, -7305), S(pp, 3), pred, kCtxA, rng);
    EXPECT_TRUE(verify_range(pp, p, pred, kCtxA));
    EXPECT_THROW(prove_range(pp, S(pp, -9000), S(pp, 3), pred, kCtxA, rng), CannotSatisfyError);
}

TEST(Range, BruteForceFourBits) {
    auto pp = setup_mock(1009);
    Rng rng = Rng::from_u64(43);
    const int th = 500;
    RangePredicate pred{0, RangeKind::at_least, th, 4};
    for (int d = -40; d < 16; ++d) {
        Scalar v = S(pp, th + d);
        Scalar t = Scalar::random(pp.group(), rng);
        if (d >= 0) {
            auto p = prove_range(pp, v, t, pred, kCtxA, rng);
            ASSERT_TRUE(verify_range(pp, p, pred, kCtxA)) << d;
        } else {
            ASSERT_THROW(prove_range(pp, v, t, pred, kCtxA, rng), CannotSatisfyError) << d;
        }
    }
}

TEST(Range, MutationsRejected) {
    auto pp = test::curve();
    Rng rng = Rng::from_u64(44);
    RangePredicate pred{0, RangeKind::at_least, 10, 3};
    auto p = prove_range(pp, S(pp, 13), S(pp, 5), pred, kCtxA, rng);
    ASSERT_TRUE(verify_range(pp, p, pred, kCtxA));
    auto back = RangeProof::decode(pp.group(), p.encode());
    EXPECT_TRUE(verify_range(pp, back, pred, kCtxA));
    std::vector<std::function<void(RangeProof&)>> muts{
        [&](RangeProof& x) { x.comp.C += pp.g; },   [&](RangeProof& x) { x.comp.T_C += pp.g; },
        [&](RangeProof& x) { x.comp.s_t += S(pp, 1); }, [&](RangeProof& x) { x.comp.T_D += pp.g; },
        [&](RangeProof& x) { x.comp.s_D += S(pp, 1); }, [&](RangeProof& x) { x.s_v += S(pp, 1); },
        [&](RangeProof& x) { x.comp.bits.pop_back(); },
    };
    for (std::size_t k = 0; k < p.comp.bits.size(); ++k) {
        muts.push_back([&, k](RangeProof& x) { x.comp.bits[k].C += pp.g; });
        muts.push_back([&, k](RangeProof& x) { x.comp.bits[k].T0 += pp.g; });
        muts.push_back([&, k](RangeProof& x) { x.comp.bits[k].T1 += pp.g; });
        muts.push_back([&, k](RangeProof& x) { x.comp.bits[k].c0 += S(pp, 1); });
        muts.push_back([&, k](RangeProof& x) { x.comp.bits[k].s0 += S(pp, 1); });
        muts.push_back([&, k](RangeProof& x) { x.comp.bits[k].s1 += S(pp, 1); });
    }
    for (std::size_t m = 0; m < muts.size(); ++m) {
        auto bad = p;
        muts[m](bad);
        EXPECT_FALSE(verify_range(pp, bad, pred, kCtxA)) << "mutation " << m;
    }
    EXPECT_FALSE(verify_range(pp, p, RangePredicate{0, RangeKind::at_least, 11, 3}, kCtxA));
}

// ---- presentation

class PresentationBoth : public test::BackendTest {};

TEST_P(PresentationBoth, MinimalShow) {
    Rng rng = Rng::from_u64(50);
    auto t = issue(pp, {S(pp, 1), S(pp, 2), S(pp, 3)}, rng);
    auto proof = prove_presentation(t.pk, t.sig, t.M, t.o.m0, {}, kCtxA, rng);
    EXPECT_TRUE(verify_presentation(t.pk, proof, {}, {}, {}, kCtxA));
    EXPECT_FALSE(verify_presentation(t.pk, proof, {}, {}, {}, kCtxB));
    auto back = PresentationProof::decode(pp.group(), proof.encode());
    EXPECT_EQ(back.encode(), proof.encode());
    EXPECT_TRUE(verify_presentation(t.pk, back, {}, {}, {}, kCtxA));
}

TEST_P(PresentationBoth, SelectiveDisclosure) {
    Rng rng = Rng::from_u64(51);
    auto t = issue(pp, {S(pp, 11), S(pp, 22), S(pp, 33)}, rng);
    PresentationRequest req;
    req.disclose = {3};
    auto proof = prove_presentation(t.pk, t.sig, t.M, t.o.m0, req, kCtxA, rng);
    auto d = disclosed_of(t.M, req.disclose);
    EXPECT_TRUE(verify_presentation(t.pk, proof, d, {}, {}, kCtxA));
    EXPECT_EQ(proof.s_hidden.size(), 2u);
    d[3] = S(pp, 34);
    EXPECT_FALSE(verify_presentation(t.pk, proof, d, {}, {}, kCtxA));
    EXPECT_FALSE(verify_presentation(t.pk, proof, {}, {}, {}, kCtxA));
    EXPECT_FALSE(verify_presentation(t.pk, proof, {{2, S(pp, 22)}}, {}, {}, kCtxA));
}

TEST_P(PresentationBoth, PredicatesLinksAndBinding) {
    Rng rng = Rng::from_u64(52);
    auto t = issue(pp, {S(pp, 7), S(pp, 9), S(pp, 7305)}, rng);
    PresentationRequest req;
    req.disclose = {1};
    req.predicates = {RangePredicate{3, RangeKind::at_most, 7400, 8}};
    G1 base = pp.g * S(pp, 5);
    req.links = {AttributeLink{2, base, base * S(pp, 9)}};
    req.bind = Opening{Scalar::random(pp.group(), rng)};
    auto proof = prove_presentation(t.pk, t.sig, t.M, t.o.m0, req, kCtxA, rng);
    ASSERT_TRUE(proof.bound.has_value());
    EXPECT_EQ(proof.bound->com, vc_commit_with(t.pk.vc(), t.M, *req.bind));
    auto d = disclosed_of(t.M, req.disclose);
    EXPECT_TRUE(verify_presentation(t.pk, proof, d, req.predicates, req.links, kCtxA));

    auto wrong_link = req.links;
    wrong_link[0].target = base * S(pp, 10);
    EXPECT_FALSE(verify_presentation(t.pk, proof, d, req.predicates, wrong_link, kCtxA));
    auto wrong_pred = req.predicates;
    wrong_pred[0].threshold = 7300;
    EXPECT_FALSE(verify_presentation(t.pk, proof, d, wrong_pred, req.links, kCtxA));
    EXPECT_FALSE(verify_presentation(t.pk, proof, d, {}, req.links, kCtxA));
    auto rebound = proof;
    rebound.bound->com.c += pp.g;
    EXPECT_FALSE(verify_presentation(t.pk, rebound, d, req.predicates, req.links, kCtxA));
    auto back = PresentationProof::decode(pp.group(), proof.encode());
    EXPECT_TRUE(verify_presentation(t.pk, back, d, req.predicates, req.links, kCtxA));
}

TEST_P(PresentationBoth, ProverRefusals) {
    Rng rng = Rng::from_u64(53);
    auto t = issue(pp, {S(pp, 7), S(pp, 9)}, rng);
    PresentationRequest req;
    req.disclose = {2};
    req.predicates = {RangePredicate{2, RangeKind::at_least, 0, 8}};
    EXPECT_THROW(prove_presentation(t.pk, t.sig, t.M, t.o.m0, req, kCtxA, rng), RedundantPredicateError);
    req.disclose = {};
    req.predicates = {RangePredicate{2, RangeKind::at_least, 10, 8}};
    EXPECT_THROW(prove_presentation(t.pk, t.sig, t.M, t.o.m0, req, kCtxA, rng), CannotSatisfyError);
    req.predicates = {RangePredicate{2, RangeKind::at_least, 0, 2}};
    EXPECT_THROW(prove_presentation(t.pk, t.sig, t.M, t.o.m0, req, kCtxA, rng), CapacityError);
    req.predicates = {};
    req.disclose = {3};
    EXPECT_THROW(prove_presentation(t.pk, t.sig, t.M, t.o.m0, req, kCtxA, rng), PositionError);
}

TEST_P(PresentationBoth, SingleFieldMutationsRejected) {
    Rng rng = Rng::from_u64(54);
    auto t = issue(pp, {S(pp, 4), S(pp, 5), S(pp, 6)}, rng);
    PresentationRequest req;
    req.disclose = {1};
    req.predicates = {RangePredicate{3, RangeKind::at_least, 2, 3}};
    auto proof = prove_presentation(t.pk, t.sig, t.M, t.o.m0, req, kCtxA, rng);
    auto d = disclosed_of(t.M, req.disclose);
    ASSERT_TRUE(verify_presentation(t.pk, proof, d, req.predicates, {}, kCtxA));
    std::vector<std::function<void(PresentationProof&)>> muts{
        [&](PresentationProof& x) { x.sig.a += pp.g; },
        [&](PresentationProof& x) { x.sig.b += pp.g; },
        [&](PresentationProof& x) { x.sig.c += pp.g; },
        [&](PresentationProof& x) { x.T = x.T * pp.gt; },
        [&](PresentationProof& x) { x.s_rho += S(pp, 1); },
        [&](PresentationProof& x) { x.s_m0 += S(pp, 1); },
        [&](PresentationProof& x) { x.ranges[0].s_D += S(pp, 1); },
        [&](PresentationProof& x) { x.ranges[0].C += pp.g; },
    };
    for (std::size_t i = 0; i < 3; ++i) {
        muts.push_back([&, i](PresentationProof& x) { x.sig.A[i] += pp.g; });
        muts.push_back([&, i](PresentationProof& x) { x.sig.B[i] += pp.g; });
    }
    for (std::size_t i = 0; i < proof.s_hidden.size(); ++i) {
        muts.push_back([&, i](PresentationProof& x) { x.s_hidden[i] += S(pp, 1); });
    }
    for (std::size_t m = 0; m < muts.size(); ++m) {
        auto bad = proof;
        muts[m](bad);
        EXPECT_FALSE(verify_presentation(t.pk, bad, d, req.predicates, {}, kCtxA)) << "mutation " << m;
    }
}

TEST_P(PresentationBoth, TwoShowsShareNothing) {
    PublicParams p = is_curve() ? pp : test::mock_big();
    Rng rng = Rng::from_u64(55);
    auto t = issue(p, {S(p, 4), S(p, 5), S(p, 6)}, rng);
    PresentationRequest req;
    req.disclose = {2};
    auto parts = [](const PresentationProof& x) {
        std::set<Bytes> s;
        s.insert(x.sig.a.encode());
        s.insert(x.sig.b.encode());
        s.insert(x.sig.c.encode());
        for (const auto& e : x.sig.A) s.insert(e.encode());
        for (const auto& e : x.sig.B) s.insert(e.encode());
        s.insert(x.T.encode());
        s.insert(x.s_rho.encode());
        s.insert(x.s_m0.encode());
        for (const auto& e : x.s_hidden) s.insert(e.encode());
        return s;
    };
    for (int k = 0; k < trials(100, 5); ++k) {
        auto a = prove_presentation(t.pk, t.sig, t.M, t.o.m0, req, kCtxA, rng);
        auto b = prove_presentation(t.pk, t.sig, t.M, t.o.m0, req, kCtxA, rng);
        auto pa = parts(a), pb = parts(b);
        for (const auto& e : pa) ASSERT_FALSE(pb.contains(e));
        if (k == 0) {
            auto d = disclosed_of(t.M, req.disclose);
            EXPECT_TRUE(verify_presentation(t.pk, a, d, {}, {}, kCtxA));
            EXPECT_TRUE(verify_presentation(t.pk, b, d, {}, {}, kCtxA));
        }
    }
}

ZK_BOTH_BACKENDS(PresentationBoth);

TEST(Presentation, MockGtEquationClosesExactly) {
    // Hand-built credential: q = 101, x=3, y=5, z=(7, 2), M=(2, 6), m0=4, alpha=2.
    auto pp = setup_mock(101);
    auto [sk, pk] = cl_keygen_from(pp, S(pp, 3), S(pp, 5), {S(pp, 7), S(pp, 2)});
    AttributeVector M{S(pp, 2), S(pp, 6)};
    auto com = vc_commit_with(pk.vc(), M, Opening{S(pp, 4)});
    ASSERT_EQ(ex(com.c), static_cast<unsigned long>((4 + 2 * 7 + 6 * 2) % 101));
    auto sig = cl_issue_with_alpha(sk, pk, com, S(pp, 2));
    auto rs = cl_randomize_with(sig, S(pp, 3), S(pp, 4));
    Rng rng = Rng::from_u64(56);
    PresentationRequest req;
    req.disclose = {2};
    auto proof = prove_presentation_with(pk, rs, M, S(pp, 4), req, kCtxA, rng);
    ASSERT_TRUE(verify_presentation(pk, proof, {{2, M[1]}}, {}, {}, kCtxA));

    // Witness relation in exponents: rho*c^ = x*(a~ + m0*b~ + sum m_i*B~_i)
    long long a = ex(rs.sig.a), b = ex(rs.sig.b), c = ex(rs.sig.c);
    long long B1 = ex(rs.sig.B[0]), B2 = ex(rs.sig.B[1]);
    long long rho = S(pp, 4).inverse().to_ulong();
    long long lhs = rho * c % 101;
    long long rhs = 3 * ((a + 4 * b + 2 * B1 + 6 * B2) % 101) % 101;
    EXPECT_EQ(lhs, rhs);
    // Verifier-side: s_rho*c^ - x*(s0*b~ + s1*B~_1 + ch*(a~ + m2*B~_2)) = T
    auto disclosed = std::map<std::uint32_t, Scalar>{{2, M[1]}};
    Transcript tr(pp, "zkfaith/proof/presentation");
    tr.append("pk", pk.fingerprint()).append("context", kCtxA).append_u64("l", 2);
    tr.append_u64("disclosed.pos", 2).append("disclosed.value", M[1]);
    tr.append("sig.a", proof.sig.a);
    for (const auto& x : proof.sig.A) tr.append("sig.A", x);
    tr.append("sig.b", proof.sig.b);
    for (const auto& x : proof.sig.B) tr.append("sig.B", x);
    tr.append("sig.c", proof.sig.c).append("T", proof.T);
    long long ch = tr.challenge().to_ulong();
    long long sr = proof.s_rho.to_ulong(), s0 = proof.s_m0.to_ulong(), s1 = proof.s_hidden[0].to_ulong();
    long long inner = (s0 * b + s1 * B1 + ch * ((a + 6 * B2) % 101)) % 101;
    long long T = ((sr * c - 3 * inner) % 101 + 101) % 101;
    EXPECT_EQ(T, static_cast<long long>(ex(proof.T)));
}

// ---- update link

class LinkBoth : public test::BackendTest {};

TEST_P(LinkBoth, CompletenessAndRefusal) {
    Rng rng = Rng::from_u64(60);
    auto v = vc_setup(pp, 3);
    AttributeVector M{S(pp, 1), S(pp, 2), S(pp, 3)};
    auto [com, o] = vc_commit(v, M, rng);
    // unchanged value, fresh randomness
    auto [same, o_same] = vc_update(v, com, M[1], M[1], 2, o, rng);
    auto p = prove_update_link(v, com, same, M, M, o, o_same, 2, kCtxA, rng);
    EXPECT_TRUE(verify_update_link(v, com, same, 2, M[1], p, kCtxA));
    EXPECT_FALSE(verify_update_link(v, com, same, 2, M[1], p, kCtxB));

    auto M2 = M;
    M2[1] = S(pp, 20);
    auto [c2, o2] = vc_update(v, com, M[1], M2[1], 2, o, rng);
    auto p2 = prove_update_link(v, com, c2, M, M2, o, o2, 2, kCtxA, rng);
    EXPECT_TRUE(verify_update_link(v, com, c2, 2, M2[1], p2, kCtxA));
    EXPECT_FALSE(verify_update_link(v, com, c2, 2, S(pp, 21), p2, kCtxA));
    EXPECT_FALSE(verify_update_link(v, com, c2, 3, M2[1], p2, kCtxA));

    // differs at 2 and 3
    auto M3 = M2;
    M3[2] = S(pp, 30);
    auto [c3, o3] = vc_commit(v, M3, rng);
    EXPECT_THROW(prove_update_link(v, com, c3, M, M3, o, o3, 2, kCtxA, rng), CannotSatisfyError);
    // a proof for c2 does not carry over to c3
    EXPECT_FALSE(verify_update_link(v, com, c3, 2, M3[1], p2, kCtxA));
    auto back = UpdateLinkProof::decode(pp.group(), p2.encode());
    EXPECT_TRUE(verify_update_link(v, com, c2, 2, M2[1], back, kCtxA));

    std::vector<std::function<void(UpdateLinkProof&)>> muts{
        [&](UpdateLinkProof& x) { x.T_old += pp.g; },      [&](UpdateLinkProof& x) { x.T_new += pp.g; },
        [&](UpdateLinkProof& x) { x.s0_old += S(pp, 1); }, [&](UpdateLinkProof& x) { x.s0_new += S(pp, 1); },
        [&](UpdateLinkProof& x) { x.j = 1; },
    };
    for (std::size_t k = 0; k < 3; ++k) muts.push_back([&, k](UpdateLinkProof& x) { x.s[k] += S(pp, 1); });
    for (std::size_t m = 0; m < muts.size(); ++m) {
        auto bad = p2;
        muts[m](bad);
        EXPECT_FALSE(verify_update_link(v, com, c2, 2, M2[1], bad, kCtxA)) << "mutation " << m;
    }
}

ZK_BOTH_BACKENDS(LinkBoth);

TEST(Link, MockHandCase) {
    // q = 101, g = 1, Z = (3, 5, 11), M = (1, 2, 4), m0 = 6 -> com 6+3+10+44 = 63;
    // j = 2 to 9 with m0' = 8 -> com' 8+3+45+44 = 100.
    auto pp = setup_mock(101);
    auto v = VCParams::from_bases(pp, {pp.g * S(pp, 3), pp.g * S(pp, 5), pp.g * S(pp, 11)});
    AttributeVector M{S(pp, 1), S(pp, 2), S(pp, 4)};
    auto com = vc_commit_with(v, M, Opening{S(pp, 6)});
    ASSERT_EQ(ex(com.c), 63u);
    auto com2 = vc_update_with(v, com, S(pp, 2), S(pp, 9), 2, Opening{S(pp, 6)}, Opening{S(pp, 8)});
    ASSERT_EQ(ex(com2.c), 100u);
    auto M2 = M;
    M2[1] = S(pp, 9);
    Rng rng = Rng::from_u64(61);
    auto p = prove_update_link(v, com, com2, M, M2, Opening{S(pp, 6)}, Opening{S(pp, 8)}, 2, kCtxA, rng);
    ASSERT_TRUE(verify_update_link(v, com, com2, 2, S(pp, 9), p, kCtxA));
    // T_new + c*(com' - 9*5) = s0' + 3*s1 + 11*s3 in exponents
    Transcript tr(pp, "zkfaith/proof/update-link");
    tr.append("g", v.g);
    for (const auto& z : v.Z) tr.append("Z", z);
    tr.append("com", com.c).append("com_new", com2.c).append_u64("j", 2).append("value", S(pp, 9));
    tr.append("T_old", p.T_old).append("T_new", p.T_new).append("context", kCtxA);
    long long c = tr.challenge().to_ulong();
    long long lhs = (static_cast<long long>(ex(p.T_new)) + c * ((100 - 45 + 101) % 101)) % 101;
    long long rhs = (p.s0_new.to_ulong() + 3 * p.s[0].to_ulong() + 11 * p.s[2].to_ulong()) % 101;
    EXPECT_EQ(lhs, rhs);
}
