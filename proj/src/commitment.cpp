#include "zkfaith/commitment.hpp"

#include "zkfaith/codec.hpp"
#include "zkfaith/transcript.hpp"

namespace zkfaith {
namespace {

constexpr std::uint8_t kTagCommitment = 0x10;
constexpr std::uint8_t kTagPositionProof = 0x11;
constexpr std::uint8_t kVersion = 1;

void check_position(const VCParams& params, std::size_t i) {
    if (i < 1 || i > params.l()) {
        throw PositionError("position " + std::to_string(i) + " outside 1.." + std::to_string(params.l()));
    }
}

void check_com(const VCParams& params, const Commitment& com) {
    if (com.l != params.l()) throw InvalidLengthError("commitment length does not match parameters");
}

Scalar open_challenge(const VCParams& params, const Commitment& com, const Scalar& m, std::size_t i, const G1& T) {
    Transcript t(params.pp, "zkfaith/vc/open");
    for (const auto& z : params.Z) t.append("Z", z);
    t.append("com", com.c).append_u64("i", i).append("m", m).append("T", T);
    return t.challenge();
}

}  // namespace

const G1& VCParams::base(std::size_t i) const {
    if (i < 1 || i > Z.size()) throw PositionError("position " + std::to_string(i) + " out of range");
    return Z[i - 1];
}

VCParams VCParams::from_bases(const PublicParams& pp, std::vector<G1> Z) {
    if (Z.empty()) throw InvalidLengthError("vector length must be at least 1");
    return VCParams{pp, pp.g, std::move(Z)};
}

void check_length(const VCParams& params, const AttributeVector& M) {
    if (M.size() != params.l()) {
        throw InvalidLengthError("attribute vector has " + std::to_string(M.size()) + " entries, expected " +
                                 std::to_string(params.l()));
    }
}

VCParams vc_setup(const PublicParams& pp, std::size_t l) {
    if (l == 0) throw InvalidLengthError("vector length must be at least 1");
    std::vector<G1> Z;
    Z.reserve(l);
    for (std::size_t i = 1; i <= l; ++i) {
        ByteWriter a, b;
        a.u32(static_cast<std::uint32_t>(l));
        b.u32(static_cast<std::uint32_t>(i));
        std::vector<Bytes> in{a.take(), b.take()};
        Z.push_back(hash_to_g1(pp, "zkfaith/vc/base", in));
    }
    return VCParams{pp, pp.g, std::move(Z)};
}

Commitment vc_commit_with(const VCParams& params, const AttributeVector& M, const Opening& opening) {
    check_length(params, M);
    std::vector<G1> bases{params.g};
    bases.insert(bases.end(), params.Z.begin(), params.Z.end());
    std::vector<Scalar> ks{opening.m0};
    ks.insert(ks.end(), M.begin(), M.end());
    return Commitment{msm(bases, ks), static_cast<std::uint32_t>(params.l())};
}

std::pair<Commitment, Opening> vc_commit(const VCParams& params, const AttributeVector& M, Rng& rng) {
    Opening o{Scalar::random(params.pp.group(), rng)};
    return {vc_commit_with(params, M, o), o};
}

Commitment vc_update_with(const VCParams& params, const Commitment& com, const Scalar& old_value,
                          const Scalar& new_value, std::size_t j, const Opening& opening, const Opening& fresh) {
    check_position(params, j);
    check_com(params, com);
    G1 c = com.c + params.base(j) * (new_value - old_value) + params.g * (fresh.m0 - opening.m0);
    return Commitment{c, com.l};
}

std::pair<Commitment, Opening> vc_update(const VCParams& params, const Commitment& com, const Scalar& old_value,
                                         const Scalar& new_value, std::size_t j, const Opening& opening, Rng& rng) {
    check_position(params, j);
    Opening fresh{Scalar::random(params.pp.group(), rng)};
    return {vc_update_with(params, com, old_value, new_value, j, opening, fresh), fresh};
}

PositionProof vc_open(const VCParams& params, const Commitment& com, const AttributeVector& M, const Opening& opening,
                      std::size_t i, Rng& rng) {
    check_position(params, i);
    check_length(params, M);
    check_com(params, com);
    const auto& ctx = params.pp.group();

    std::vector<G1> bases{params.g};
    std::vector<Scalar> k{Scalar::random(ctx, rng)};
    for (std::size_t p = 1; p <= params.l(); ++p) {
        if (p == i) continue;
        bases.push_back(params.base(p));
        k.push_back(Scalar::random(ctx, rng));
    }
    G1 T = msm(bases, k);
    Scalar c = open_challenge(params, com, M[i - 1], i, T);

    PositionProof proof{static_cast<std::uint32_t>(i), T, k[0] + c * opening.m0, {}};
    std::size_t idx = 1;
    for (std::size_t p = 1; p <= params.l(); ++p) {
        if (p == i) continue;
        proof.s.push_back(k[idx++] + c * M[p - 1]);
    }
    return proof;
}

bool vc_verify(const VCParams& params, const Commitment& com, const Scalar& m, std::size_t i,
               const PositionProof& proof) {
    try {
        if (proof.i != i || i < 1 || i > params.l() || com.l != params.l()) return false;
        if (proof.s.size() + 1 != params.l()) return false;
        Scalar c = open_challenge(params, com, m, i, proof.T);

        // s0*g + sum s_p*Z_p == T + c*(com - m*Z_i)
        std::vector<G1> bases{params.g};
        std::vector<Scalar> s{proof.s0};
        std::size_t idx = 0;
        for (std::size_t p = 1; p <= params.l(); ++p) {
            if (p == i) continue;
            bases.push_back(params.base(p));
            s.push_back(proof.s[idx++]);
        }
        bases.push_back(params.base(i));
        s.push_back(c * m);
        bases.push_back(com.c);
        s.push_back(-c);
        return msm(bases, s) == proof.T;
    } catch (const UsageError&) {
        return false;
    }
}

Bytes Commitment::encode() const {
    ByteWriter w;
    put_header(w, kTagCommitment, kVersion);
    w.u32(l);
    put(w, c);
    return w.take();
}

Commitment Commitment::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagCommitment, kVersion);
    Commitment com;
    com.l = r.u32();
    com.c = get_g1(r, ctx);
    r.expect_end();
    return com;
}

Bytes PositionProof::encode() const {
    ByteWriter w;
    put_header(w, kTagPositionProof, kVersion);
    w.u32(i);
    put(w, T);
    put(w, s0);
    put_vec(w, s);
    return w.take();
}

PositionProof PositionProof::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagPositionProof, kVersion);
    PositionProof p;
    p.i = r.u32();
    p.T = get_g1(r, ctx);
    p.s0 = get_scalar(r, ctx);
    p.s = get_scalars(r, ctx);
    r.expect_end();
    return p;
}

}  // namespace zkfaith
