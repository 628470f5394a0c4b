#include "zkfaith/proofs.hpp"

#include <algorithm>

#include "zkfaith/codec.hpp"

namespace zkfaith {
namespace {

constexpr std::uint8_t kTagOpening = 0x30;
constexpr std::uint8_t kTagRange = 0x31;
constexpr std::uint8_t kTagPresentation = 0x32;
constexpr std::uint8_t kTagUpdateLink = 0x33;
constexpr std::uint8_t kVersion = 1;

Scalar pow2(const GroupContext& ctx, std::uint32_t k) {
    mpz_class v = 1;
    v <<= k;
    return Scalar(ctx, v);
}

bool fits_bits(const PublicParams& pp, std::uint32_t n) {
    if (n == 0) return false;
    mpz_class bound = 1;
    bound <<= n;
    return bound < pp.q();
}

void append_bases(Transcript& t, const VCParams& params) {
    t.append("g", params.g);
    for (const auto& z : params.Z) t.append("Z", z);
}

void append_predicate(Transcript& t, const RangePredicate& p) {
    t.append_u64("pos", p.position)
        .append_u64("kind", static_cast<std::uint64_t>(p.kind))
        .append_u64("threshold", static_cast<std::uint64_t>(p.threshold))
        .append_u64("bits", p.n_bits);
}

Scalar threshold_scalar(const PublicParams& pp, std::int64_t threshold) {
    return Scalar::from_int(pp.group(), threshold);
}

// ---- component codecs

void put_bit(ByteWriter& w, const BitProof& b) {
    put(w, b.C);
    put(w, b.T0);
    put(w, b.T1);
    put(w, b.c0);
    put(w, b.s0);
    put(w, b.s1);
}

BitProof get_bit(ByteReader& r, const GroupContext& ctx) {
    BitProof b;
    b.C = get_g1(r, ctx);
    b.T0 = get_g1(r, ctx);
    b.T1 = get_g1(r, ctx);
    b.c0 = get_scalar(r, ctx);
    b.s0 = get_scalar(r, ctx);
    b.s1 = get_scalar(r, ctx);
    return b;
}

void put_range(ByteWriter& w, const RangeComponent& c) {
    put(w, c.C);
    put(w, c.T_C);
    put(w, c.s_t);
    w.u32(static_cast<std::uint32_t>(c.bits.size()));
    for (const auto& b : c.bits) put_bit(w, b);
    put(w, c.T_D);
    put(w, c.s_D);
}

RangeComponent get_range(ByteReader& r, const GroupContext& ctx) {
    RangeComponent c;
    c.C = get_g1(r, ctx);
    c.T_C = get_g1(r, ctx);
    c.s_t = get_scalar(r, ctx);
    std::uint32_t n = r.count(6 * 4);
    for (std::uint32_t i = 0; i < n; ++i) c.bits.push_back(get_bit(r, ctx));
    c.T_D = get_g1(r, ctx);
    c.s_D = get_scalar(r, ctx);
    return c;
}

}  // namespace

// ---- opening

namespace {

Scalar opening_challenge(const VCParams& params, const Commitment& com, const G1& T,
                         std::span<const std::uint8_t> context) {
    Transcript t(params.pp, "zkfaith/proof/opening");
    append_bases(t, params);
    t.append("com", com.c).append("T", T).append("context", context);
    return t.challenge();
}

std::vector<G1> opening_bases(const VCParams& params) {
    std::vector<G1> bases{params.g};
    bases.insert(bases.end(), params.Z.begin(), params.Z.end());
    return bases;
}

}  // namespace

ProofOfOpening prove_opening(const VCParams& params, const Commitment& com, const AttributeVector& M,
                             const Opening& opening, std::span<const std::uint8_t> context, Rng& rng) {
    check_length(params, M);
    const auto& ctx = params.pp.group();
    std::vector<Scalar> k;
    for (std::size_t i = 0; i <= params.l(); ++i) k.push_back(Scalar::random(ctx, rng));
    ProofOfOpening proof{msm(opening_bases(params), k), {}};
    Scalar c = opening_challenge(params, com, proof.T, context);
    proof.s.push_back(k[0] + c * opening.m0);
    for (std::size_t i = 1; i <= params.l(); ++i) proof.s.push_back(k[i] + c * M[i - 1]);
    return proof;
}

bool opening_equation_holds(const VCParams& params, const Commitment& com, const ProofOfOpening& proof,
                            const Scalar& challenge) {
    try {
        if (proof.s.size() != params.l() + 1 || com.l != params.l()) return false;
        auto bases = opening_bases(params);
        bases.push_back(com.c);
        std::vector<Scalar> s = proof.s;
        s.push_back(-challenge);
        return msm(bases, s) == proof.T;
    } catch (const UsageError&) {
        return false;
    }
}

bool verify_opening(const VCParams& params, const Commitment& com, const ProofOfOpening& proof,
                    std::span<const std::uint8_t> context) {
    try {
        return opening_equation_holds(params, com, proof, opening_challenge(params, com, proof.T, context));
    } catch (const UsageError&) {
        return false;
    }
}

ProofOfOpening simulate_opening(const VCParams& params, const Commitment& com, const Scalar& challenge, Rng& rng) {
    const auto& ctx = params.pp.group();
    ProofOfOpening proof;
    for (std::size_t i = 0; i <= params.l(); ++i) proof.s.push_back(Scalar::random(ctx, rng));
    proof.T = msm(opening_bases(params), proof.s) - com.c * challenge;
    return proof;
}

Bytes ProofOfOpening::encode() const {
    ByteWriter w;
    put_header(w, kTagOpening, kVersion);
    put(w, T);
    put_vec(w, s);
    return w.take();
}

ProofOfOpening ProofOfOpening::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagOpening, kVersion);
    ProofOfOpening p;
    p.T = get_g1(r, ctx);
    p.s = get_scalars(r, ctx);
    r.expect_end();
    return p;
}

// ---- range

RangeBases range_bases(const PublicParams& pp) {
    std::vector<Bytes> none;
    return RangeBases{hash_to_g1(pp, "zkfaith/range/G", none), hash_to_g1(pp, "zkfaith/range/H", none)};
}

G1 pedersen(const PublicParams& pp, const Scalar& value, const Scalar& blinding) {
    auto b = range_bases(pp);
    return b.G * value + b.H * blinding;
}

Scalar range_difference(const PublicParams& pp, const Scalar& value, RangeKind kind, std::int64_t threshold,
                        std::uint32_t n_bits) {
    if (!fits_bits(pp, n_bits)) {
        throw CapacityError("range of " + std::to_string(n_bits) + " bits does not fit the group order");
    }
    Scalar th = threshold_scalar(pp, threshold);
    Scalar d = kind == RangeKind::at_least ? value - th : th - value;
    mpz_class bound = 1;
    bound <<= n_bits;
    if (d.value() < bound) return d;
    // Scalars are read as signed integers in (-q/2, q/2).
    if (d.value() > pp.q() / 2) throw CannotSatisfyError("range predicate does not hold");
    throw CapacityError("difference exceeds " + std::to_string(n_bits) + " bits");
}

RangeProver::RangeProver(const PublicParams& pp, const RangePredicate& pred, const Scalar& value,
                         const Scalar& k_value, Rng& rng, std::optional<Scalar> blinding)
    : pp_(pp), bases_(range_bases(pp)), pred_(pred) {
    const auto& ctx = pp.group();
    Scalar d = range_difference(pp, value, pred.kind, pred.threshold, pred.n_bits);
    t_ = blinding ? *blinding : Scalar::random(ctx, rng);
    k_t_ = Scalar::random(ctx, rng);
    comp_.C = bases_.G * value + bases_.H * t_;
    comp_.T_C = bases_.G * k_value + bases_.H * k_t_;

    Scalar weighted = Scalar::zero(ctx);
    for (std::uint32_t k = 0; k < pred.n_bits; ++k) {
        bool b = mpz_tstbit(d.value().get_mpz_t(), k) != 0;
        Scalar tk = Scalar::random(ctx, rng);
        Scalar u = Scalar::random(ctx, rng);
        Scalar csim = Scalar::random(ctx, rng);
        Scalar ssim = Scalar::random(ctx, rng);
        BitProof bp;
        bp.C = bases_.H * tk;
        if (b) bp.C += bases_.G;
        G1 Y0 = bp.C;
        G1 Y1 = bp.C - bases_.G;
        if (b) {
            bp.T1 = bases_.H * u;
            bp.T0 = bases_.H * ssim - Y0 * csim;
        } else {
            bp.T0 = bases_.H * u;
            bp.T1 = bases_.H * ssim - Y1 * csim;
        }
        comp_.bits.push_back(bp);
        bit_.push_back(b);
        bit_t_.push_back(tk);
        bit_u_.push_back(u);
        bit_csim_.push_back(csim);
        bit_ssim_.push_back(ssim);
        weighted += pow2(ctx, k) * tk;
    }
    delta_ = (pred.kind == RangeKind::at_least ? t_ : -t_) - weighted;
    u_D_ = Scalar::random(ctx, rng);
    comp_.T_D = bases_.H * u_D_;
}

void absorb_range(Transcript& t, const RangeComponent& comp) {
    t.append("range.C", comp.C).append("range.T_C", comp.T_C);
    for (const auto& b : comp.bits) t.append("bit.C", b.C).append("bit.T0", b.T0).append("bit.T1", b.T1);
    t.append("range.T_D", comp.T_D);
}

void RangeProver::commit(Transcript& t) const { absorb_range(t, comp_); }

RangeComponent RangeProver::respond(const Scalar& c) const {
    RangeComponent out = comp_;
    out.s_t = k_t_ + c * t_;
    for (std::size_t k = 0; k < out.bits.size(); ++k) {
        auto& bp = out.bits[k];
        if (bit_[k]) {
            bp.c0 = bit_csim_[k];
            bp.s0 = bit_ssim_[k];
            bp.s1 = bit_u_[k] + (c - bp.c0) * bit_t_[k];
        } else {
            Scalar c1 = bit_csim_[k];
            bp.c0 = c - c1;
            bp.s0 = bit_u_[k] + bp.c0 * bit_t_[k];
            bp.s1 = bit_ssim_[k];
        }
    }
    out.s_D = u_D_ + c * delta_;
    return out;
}

bool check_range(const PublicParams& pp, const RangePredicate& pred, const RangeComponent& comp,
                 const Scalar& s_value, const Scalar& c) {
    try {
        if (!fits_bits(pp, pred.n_bits) || comp.bits.size() != pred.n_bits) return false;
        const auto& ctx = pp.group();
        auto B = range_bases(pp);
        {
            std::array<G1, 3> pts{B.G, B.H, comp.C};
            std::array<Scalar, 3> ks{s_value, comp.s_t, -c};
            if (msm(pts, ks) != comp.T_C) return false;
        }
        G1 sum = G1::identity(ctx);
        std::vector<G1> cs;
        std::vector<Scalar> ws;
        for (std::uint32_t k = 0; k < pred.n_bits; ++k) {
            const auto& bp = comp.bits[k];
            if (B.H * bp.s0 - bp.C * bp.c0 != bp.T0) return false;
            if (B.H * bp.s1 - (bp.C - B.G) * (c - bp.c0) != bp.T1) return false;
            cs.push_back(bp.C);
            ws.push_back(pow2(ctx, k));
        }
        sum = msm(cs, ws);
        G1 th = B.G * threshold_scalar(pp, pred.threshold);
        G1 D = pred.kind == RangeKind::at_least ? comp.C - th - sum : th - comp.C - sum;
        return B.H * comp.s_D - D * c == comp.T_D;
    } catch (const UsageError&) {
        return false;
    }
}

namespace {

Scalar range_challenge(const PublicParams& pp, const RangePredicate& pred, const RangeComponent& comp,
                       std::span<const std::uint8_t> context) {
    Transcript t(pp, "zkfaith/proof/range");
    append_predicate(t, pred);
    t.append("context", context);
    absorb_range(t, comp);
    return t.challenge();
}

}  // namespace

RangeProof prove_range(const PublicParams& pp, const Scalar& value, const Scalar& blinding, const RangePredicate& pred,
                       std::span<const std::uint8_t> context, Rng& rng) {
    Scalar k_v = Scalar::random(pp.group(), rng);
    RangeProver prover(pp, pred, value, k_v, rng, blinding);
    Scalar c = range_challenge(pp, pred, prover.partial(), context);
    return RangeProof{prover.respond(c), k_v + c * value};
}

bool verify_range(const PublicParams& pp, const RangeProof& proof, const RangePredicate& pred,
                  std::span<const std::uint8_t> context) {
    try {
        Scalar c = range_challenge(pp, pred, proof.comp, context);
        return check_range(pp, pred, proof.comp, proof.s_v, c);
    } catch (const UsageError&) {
        return false;
    }
}

Bytes RangeProof::encode() const {
    ByteWriter w;
    put_header(w, kTagRange, kVersion);
    put_range(w, comp);
    put(w, s_v);
    return w.take();
}

RangeProof RangeProof::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagRange, kVersion);
    RangeProof p;
    p.comp = get_range(r, ctx);
    p.s_v = get_scalar(r, ctx);
    r.expect_end();
    return p;
}

// ---- presentation

namespace {

Scalar presentation_challenge(const IssuerPublicKey& pk, const PresentationProof& proof,
                              const std::map<std::uint32_t, Scalar>& disclosed,
                              const std::vector<RangePredicate>& predicates, const std::vector<AttributeLink>& links,
                              std::span<const std::uint8_t> context) {
    Transcript t(pk.pp, "zkfaith/proof/presentation");
    t.append("pk", pk.fingerprint()).append("context", context).append_u64("l", pk.l());
    for (const auto& [pos, v] : disclosed) t.append_u64("disclosed.pos", pos).append("disclosed.value", v);
    for (const auto& p : predicates) append_predicate(t, p);
    t.append("sig.a", proof.sig.a);
    for (const auto& x : proof.sig.A) t.append("sig.A", x);
    t.append("sig.b", proof.sig.b);
    for (const auto& x : proof.sig.B) t.append("sig.B", x);
    t.append("sig.c", proof.sig.c).append("T", proof.T);
    if (proof.bound) t.append("bound.com", proof.bound->com.c).append("bound.T", proof.bound->T);
    for (std::size_t i = 0; i < links.size(); ++i) {
        t.append_u64("link.pos", links[i].position)
            .append("link.base", links[i].base)
            .append("link.target", links[i].target)
            .append("link.T", proof.link_T[i]);
    }
    for (const auto& r : proof.ranges) absorb_range(t, r);
    return t.challenge();
}

std::vector<std::uint32_t> hidden_positions(std::size_t l, const std::set<std::uint32_t>& disclosed) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t p = 1; p <= l; ++p) {
        if (!disclosed.contains(p)) out.push_back(p);
    }
    return out;
}

std::set<std::uint32_t> keys_of(const std::map<std::uint32_t, Scalar>& m) {
    std::set<std::uint32_t> s;
    for (const auto& kv : m) s.insert(kv.first);
    return s;
}

}  // namespace

PresentationProof prove_presentation_with(const IssuerPublicKey& pk, const RandomizedSignature& rs,
                                          const AttributeVector& M, const Scalar& m0, const PresentationRequest& req,
                                          std::span<const std::uint8_t> context, Rng& rng) {
    const PublicParams& pp = pk.pp;
    const auto& ctx = pp.group();
    const std::size_t l = pk.l();
    if (M.size() != l) throw InvalidLengthError("attribute vector does not match key length");
    for (auto p : req.disclose) {
        if (p < 1 || p > l) throw PositionError("disclosed position " + std::to_string(p) + " out of range");
    }
    for (const auto& pr : req.predicates) {
        if (pr.position < 1 || pr.position > l) throw PositionError("predicate position out of range");
        if (req.disclose.contains(pr.position)) {
            throw RedundantPredicateError("predicate on disclosed position " + std::to_string(pr.position));
        }
    }
    for (const auto& ln : req.links) {
        if (ln.position < 1 || ln.position > l || req.disclose.contains(ln.position)) {
            throw PositionError("link must refer to a hidden position");
        }
    }
    // Refuse unsatisfiable or oversized predicates before anything is sampled.
    for (const auto& pr : req.predicates) range_difference(pp, M[pr.position - 1], pr.kind, pr.threshold, pr.n_bits);

    const auto hidden = hidden_positions(l, req.disclose);
    const Signature& s = rs.sig;
    Scalar rho = rs.r_prime.inverse();

    Scalar k_rho = Scalar::random(ctx, rng);
    Scalar k0 = Scalar::random(ctx, rng);
    std::map<std::uint32_t, Scalar> k;
    for (auto p : hidden) k.emplace(p, Scalar::random(ctx, rng));

    PresentationProof proof;
    proof.sig = s;
    {
        std::vector<G1> pts{s.b};
        std::vector<Scalar> ks{k0};
        for (auto p : hidden) {
            pts.push_back(s.B[p - 1]);
            ks.push_back(k.at(p));
        }
        std::array<G1, 2> us{s.c * k_rho, -msm(pts, ks)};
        std::array<G2, 2> vs{pp.h, pk.X};
        proof.T = pair_product(us, vs);
    }

    Scalar k0_bind;
    if (req.bind) {
        VCParams vc = pk.vc();
        k0_bind = Scalar::random(ctx, rng);
        std::vector<G1> pts{vc.g};
        std::vector<Scalar> ks{k0_bind};
        for (auto p : hidden) {
            pts.push_back(vc.base(p));
            ks.push_back(k.at(p));
        }
        proof.bound = BoundCommitment{vc_commit_with(vc, M, *req.bind), msm(pts, ks), {}};
    }

    for (const auto& ln : req.links) proof.link_T.push_back(ln.base * k.at(ln.position));

    std::vector<RangeProver> provers;
    for (const auto& pr : req.predicates) {
        provers.emplace_back(pp, pr, M[pr.position - 1], k.at(pr.position), rng);
        proof.ranges.push_back(provers.back().partial());
    }

    std::map<std::uint32_t, Scalar> disclosed;
    for (auto p : req.disclose) disclosed.emplace(p, M[p - 1]);
    Scalar c = presentation_challenge(pk, proof, disclosed, req.predicates, req.links, context);

    proof.s_rho = k_rho + c * rho;
    proof.s_m0 = k0 + c * m0;
    for (auto p : hidden) proof.s_hidden.push_back(k.at(p) + c * M[p - 1]);
    if (proof.bound) proof.bound->s0 = k0_bind + c * req.bind->m0;
    for (std::size_t i = 0; i < provers.size(); ++i) proof.ranges[i] = provers[i].respond(c);
    return proof;
}

PresentationProof prove_presentation(const IssuerPublicKey& pk, const Signature& sig, const AttributeVector& M,
                                     const Scalar& m0, const PresentationRequest& req,
                                     std::span<const std::uint8_t> context, Rng& rng) {
    return prove_presentation_with(pk, cl_randomize(sig, rng), M, m0, req, context, rng);
}

bool verify_presentation(const IssuerPublicKey& pk, const PresentationProof& proof,
                         const std::map<std::uint32_t, Scalar>& disclosed,
                         const std::vector<RangePredicate>& predicates, const std::vector<AttributeLink>& links,
                         std::span<const std::uint8_t> context) {
    try {
        const PublicParams& pp = pk.pp;
        const std::size_t l = pk.l();
        const Signature& s = proof.sig;
        if (s.A.size() != l || s.B.size() != l) return false;
        for (const auto& kv : disclosed) {
            if (kv.first < 1 || kv.first > l) return false;
        }
        const auto hidden = hidden_positions(l, keys_of(disclosed));
        if (proof.s_hidden.size() != hidden.size()) return false;
        std::map<std::uint32_t, Scalar> resp;
        for (std::size_t i = 0; i < hidden.size(); ++i) resp.emplace(hidden[i], proof.s_hidden[i]);
        if (proof.ranges.size() != predicates.size() || proof.link_T.size() != links.size()) return false;
        for (const auto& pr : predicates) {
            if (!resp.contains(pr.position)) return false;
        }
        for (const auto& ln : links) {
            if (!resp.contains(ln.position)) return false;
        }

        if (s.c.is_identity()) return false;
        if (!cl_structure_ok(pk, s)) return false;

        Scalar c = presentation_challenge(pk, proof, disclosed, predicates, links, context);

        // pair(s_rho*c^, h) * pair(-(s0*b~ + sum_hidden s_i*B~_i + c*(a~ + sum_D m_i*B~_i)), X) == T
        {
            std::vector<G1> pts{s.b, s.a};
            std::vector<Scalar> ks{proof.s_m0, c};
            for (auto p : hidden) {
                pts.push_back(s.B[p - 1]);
                ks.push_back(resp.at(p));
            }
            for (const auto& [p, v] : disclosed) {
                pts.push_back(s.B[p - 1]);
                ks.push_back(c * v);
            }
            std::array<G1, 2> us{s.c * proof.s_rho, -msm(pts, ks)};
            std::array<G2, 2> vs{pp.h, pk.X};
            if (pair_product(us, vs) != proof.T) return false;
        }

        if (proof.bound) {
            const auto& b = *proof.bound;
            if (b.com.l != l) return false;
            VCParams vc = pk.vc();
            std::vector<G1> pts{vc.g, b.com.c};
            std::vector<Scalar> ks{b.s0, -c};
            for (auto p : hidden) {
                pts.push_back(vc.base(p));
                ks.push_back(resp.at(p));
            }
            for (const auto& [p, v] : disclosed) {
                pts.push_back(vc.base(p));
                ks.push_back(c * v);
            }
            if (msm(pts, ks) != b.T) return false;
        }

        for (std::size_t i = 0; i < links.size(); ++i) {
            const auto& ln = links[i];
            if (ln.base.is_identity()) return false;
            if (ln.base * resp.at(ln.position) - ln.target * c != proof.link_T[i]) return false;
        }

        for (std::size_t i = 0; i < predicates.size(); ++i) {
            if (!check_range(pp, predicates[i], proof.ranges[i], resp.at(predicates[i].position), c)) return false;
        }
        return true;
    } catch (const UsageError&) {
        return false;
    }
}

Bytes PresentationProof::encode() const {
    ByteWriter w;
    put_header(w, kTagPresentation, kVersion);
    w.bytes(sig.encode());
    put(w, T);
    put(w, s_rho);
    put(w, s_m0);
    put_vec(w, s_hidden);
    w.u32(static_cast<std::uint32_t>(ranges.size()));
    for (const auto& r : ranges) put_range(w, r);
    put_vec(w, link_T);
    w.u8(bound ? 1 : 0);
    if (bound) {
        w.bytes(bound->com.encode());
        put(w, bound->T);
        put(w, bound->s0);
    }
    return w.take();
}

PresentationProof PresentationProof::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagPresentation, kVersion);
    PresentationProof p;
    std::size_t off = r.offset();
    try {
        p.sig = Signature::decode(ctx, r.bytes());
    } catch (const DecodeError& e) {
        throw DecodeError(e.what(), off);
    }
    p.T = get_gt(r, ctx);
    p.s_rho = get_scalar(r, ctx);
    p.s_m0 = get_scalar(r, ctx);
    p.s_hidden = get_scalars(r, ctx);
    std::uint32_t n = r.count(8);
    for (std::uint32_t i = 0; i < n; ++i) p.ranges.push_back(get_range(r, ctx));
    p.link_T = get_g1s(r, ctx);
    off = r.offset();
    std::uint8_t has_bound = r.u8();
    if (has_bound > 1) throw DecodeError("bad optional flag", off);
    if (has_bound) {
        BoundCommitment b;
        off = r.offset();
        try {
            b.com = Commitment::decode(ctx, r.bytes());
        } catch (const DecodeError& e) {
            throw DecodeError(e.what(), off);
        }
        b.T = get_g1(r, ctx);
        b.s0 = get_scalar(r, ctx);
        p.bound = std::move(b);
    }
    r.expect_end();
    return p;
}

// ---- update link

namespace {

Scalar link_challenge(const VCParams& params, const Commitment& com, const Commitment& com_new, std::size_t j,
                      const Scalar& v, const G1& T_old, const G1& T_new, std::span<const std::uint8_t> context) {
    Transcript t(params.pp, "zkfaith/proof/update-link");
    append_bases(t, params);
    t.append("com", com.c).append("com_new", com_new.c).append_u64("j", j).append("value", v);
    t.append("T_old", T_old).append("T_new", T_new).append("context", context);
    return t.challenge();
}

}  // namespace

UpdateLinkProof prove_update_link(const VCParams& params, const Commitment& com, const Commitment& com_new,
                                  const AttributeVector& M, const AttributeVector& M_new, const Opening& opening,
                                  const Opening& opening_new, std::size_t j, std::span<const std::uint8_t> context,
                                  Rng& rng) {
    check_length(params, M);
    check_length(params, M_new);
    params.base(j);
    for (std::size_t p = 1; p <= params.l(); ++p) {
        if (p != j && !(M[p - 1] == M_new[p - 1])) {
            throw CannotSatisfyError("vectors differ at position " + std::to_string(p) + ", not only at " +
                                     std::to_string(j));
        }
    }
    const auto& ctx = params.pp.group();
    Scalar k0 = Scalar::random(ctx, rng), k0n = Scalar::random(ctx, rng);
    std::vector<Scalar> k;
    for (std::size_t p = 0; p < params.l(); ++p) k.push_back(Scalar::random(ctx, rng));

    std::vector<G1> pts{params.g};
    std::vector<Scalar> ks{k0};
    std::vector<G1> pts_n{params.g};
    std::vector<Scalar> ks_n{k0n};
    for (std::size_t p = 1; p <= params.l(); ++p) {
        pts.push_back(params.base(p));
        ks.push_back(k[p - 1]);
        if (p == j) continue;
        pts_n.push_back(params.base(p));
        ks_n.push_back(k[p - 1]);
    }
    UpdateLinkProof proof;
    proof.j = static_cast<std::uint32_t>(j);
    proof.T_old = msm(pts, ks);
    proof.T_new = msm(pts_n, ks_n);
    Scalar c = link_challenge(params, com, com_new, j, M_new[j - 1], proof.T_old, proof.T_new, context);
    proof.s0_old = k0 + c * opening.m0;
    proof.s0_new = k0n + c * opening_new.m0;
    for (std::size_t p = 0; p < params.l(); ++p) proof.s.push_back(k[p] + c * M[p]);
    return proof;
}

bool verify_update_link(const VCParams& params, const Commitment& com, const Commitment& com_new, std::size_t j,
                        const Scalar& new_value, const UpdateLinkProof& proof, std::span<const std::uint8_t> context) {
    try {
        if (proof.j != j || j < 1 || j > params.l()) return false;
        if (proof.s.size() != params.l() || com.l != params.l() || com_new.l != params.l()) return false;
        Scalar c = link_challenge(params, com, com_new, j, new_value, proof.T_old, proof.T_new, context);

        std::vector<G1> pts{params.g, com.c};
        std::vector<Scalar> ks{proof.s0_old, -c};
        std::vector<G1> pts_n{params.g, com_new.c, params.base(j)};
        std::vector<Scalar> ks_n{proof.s0_new, -c, c * new_value};
        for (std::size_t p = 1; p <= params.l(); ++p) {
            pts.push_back(params.base(p));
            ks.push_back(proof.s[p - 1]);
            if (p == j) continue;
            pts_n.push_back(params.base(p));
            ks_n.push_back(proof.s[p - 1]);
        }
        return msm(pts, ks) == proof.T_old && msm(pts_n, ks_n) == proof.T_new;
    } catch (const UsageError&) {
        return false;
    } catch (const PositionError&) {
        return false;
    }
}

Bytes UpdateLinkProof::encode() const {
    ByteWriter w;
    put_header(w, kTagUpdateLink, kVersion);
    w.u32(j);
    put(w, T_old);
    put(w, T_new);
    put(w, s0_old);
    put(w, s0_new);
    put_vec(w, s);
    return w.take();
}

UpdateLinkProof UpdateLinkProof::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagUpdateLink, kVersion);
    UpdateLinkProof p;
    p.j = r.u32();
    p.T_old = get_g1(r, ctx);
    p.T_new = get_g1(r, ctx);
    p.s0_old = get_scalar(r, ctx);
    p.s0_new = get_scalar(r, ctx);
    p.s = get_scalars(r, ctx);
    r.expect_end();
    return p;
}

}  // namespace zkfaith
