#include "zkfaith/cl.hpp"

#include "zkfaith/codec.hpp"

namespace zkfaith {
namespace {

constexpr std::uint8_t kTagSecretKey = 0x20;
constexpr std::uint8_t kTagPublicKey = 0x21;
constexpr std::uint8_t kTagSignature = 0x22;
constexpr std::uint8_t kVersion = 1;

// e(u1, v1) == e(u2, v2)
bool pair_eq(const G1& u1, const G2& v1, const G1& u2, const G2& v2) {
    std::array<G1, 2> us{u1, -u2};
    std::array<G2, 2> vs{v1, v2};
    return pairing_product_is_identity(us, vs);
}

}  // namespace

std::pair<IssuerSecretKey, IssuerPublicKey> cl_keygen_from(const PublicParams& pp, const Scalar& x, const Scalar& y,
                                                           const std::vector<Scalar>& z) {
    if (z.empty()) throw InvalidLengthError("key length must be at least 1");
    if (x.is_zero() || y.is_zero()) throw UsageError("key scalars must be nonzero");
    IssuerSecretKey sk{x, y, z};
    IssuerPublicKey pk{pp, pp.h * x, pp.h * y, {}, {}};
    for (const auto& zi : z) {
        if (zi.is_zero()) throw UsageError("key scalars must be nonzero");
        pk.Z.push_back(pp.g * zi);
        pk.W.push_back(pk.Y * zi);
    }
    return {std::move(sk), std::move(pk)};
}

std::pair<IssuerSecretKey, IssuerPublicKey> cl_keygen(const PublicParams& pp, std::size_t l, Rng& rng) {
    if (l == 0) throw InvalidLengthError("key length must be at least 1");
    const auto& ctx = pp.group();
    Scalar x = Scalar::random_nonzero(ctx, rng);
    Scalar y = Scalar::random_nonzero(ctx, rng);
    std::vector<Scalar> z;
    for (std::size_t i = 0; i < l; ++i) z.push_back(Scalar::random_nonzero(ctx, rng));
    return cl_keygen_from(pp, x, y, z);
}

Signature cl_issue_with_alpha(const IssuerSecretKey& sk, const IssuerPublicKey& pk, const Commitment& com,
                              const Scalar& alpha) {
    if (com.l != sk.z.size() || com.l != pk.l()) {
        throw KeyMismatchError("commitment over " + std::to_string(com.l) + " positions, key has " +
                               std::to_string(pk.l()));
    }
    const PublicParams& pp = pk.pp;
    Signature s;
    s.a = pp.g * alpha;
    s.b = s.a * sk.y;
    for (const auto& zi : sk.z) {
        s.A.push_back(s.a * zi);
        s.B.push_back(s.A.back() * sk.y);
    }
    s.c = s.a * sk.x + com.c * (sk.x * sk.y * alpha);
    return s;
}

Signature cl_issue_on_commitment(const IssuerSecretKey& sk, const IssuerPublicKey& pk, const Commitment& com,
                                 Rng& rng) {
    return cl_issue_with_alpha(sk, pk, com, Scalar::random_nonzero(pk.pp.group(), rng));
}

bool cl_structure_ok(const IssuerPublicKey& pk, const Signature& sig) {
    const PublicParams& pp = pk.pp;
    if (sig.A.size() != pk.l() || sig.B.size() != pk.l()) return false;
    if (sig.a.is_identity()) return false;
    if (!pair_eq(sig.a, pk.Y, sig.b, pp.h)) return false;
    for (std::size_t i = 0; i < pk.l(); ++i) {
        if (!pair_eq(sig.a, pk.W[i], sig.A[i], pk.Y)) return false;
        if (!pair_eq(sig.A[i], pk.Y, sig.B[i], pp.h)) return false;
    }
    return true;
}

bool cl_verify(const IssuerPublicKey& pk, const AttributeVector& M, const Scalar& m0, const Signature& sig) {
    try {
        if (M.size() != pk.l()) return false;
        if (!cl_structure_ok(pk, sig)) return false;
        // pair(a + m0*b + sum m_i*B_i, X) == pair(c, h)
        std::vector<G1> pts{sig.a, sig.b};
        std::vector<Scalar> ks{Scalar::one(pk.pp.group()), m0};
        pts.insert(pts.end(), sig.B.begin(), sig.B.end());
        ks.insert(ks.end(), M.begin(), M.end());
        return pair_eq(msm(pts, ks), pk.X, sig.c, pk.pp.h);
    } catch (const UsageError&) {
        return false;
    }
}

RandomizedSignature cl_randomize_with(const Signature& sig, const Scalar& r, const Scalar& r_prime) {
    if (r.is_zero() || r_prime.is_zero()) throw UsageError("blinding scalars must be nonzero");
    Signature t;
    t.a = sig.a * r;
    t.b = sig.b * r;
    for (const auto& x : sig.A) t.A.push_back(x * r);
    for (const auto& x : sig.B) t.B.push_back(x * r);
    t.c = sig.c * (r * r_prime);
    return RandomizedSignature{std::move(t), r, r_prime};
}

RandomizedSignature cl_randomize(const Signature& sig, Rng& rng) {
    const auto& ctx = sig.a.context();
    Scalar r = Scalar::random_nonzero(ctx, rng);
    Scalar rp = Scalar::random_nonzero(ctx, rng);
    return cl_randomize_with(sig, r, rp);
}

// ---- encodings

Bytes IssuerSecretKey::encode() const {
    ByteWriter w;
    put_header(w, kTagSecretKey, kVersion);
    put(w, x);
    put(w, y);
    put_vec(w, z);
    return w.take();
}

IssuerSecretKey IssuerSecretKey::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagSecretKey, kVersion);
    IssuerSecretKey sk;
    sk.x = get_scalar(r, ctx);
    sk.y = get_scalar(r, ctx);
    sk.z = get_scalars(r, ctx);
    r.expect_end();
    return sk;
}

Bytes IssuerPublicKey::encode() const {
    ByteWriter w;
    put_header(w, kTagPublicKey, kVersion);
    auto d = pp.digest();
    w.raw(d);
    put(w, X);
    put(w, Y);
    put_vec(w, Z);
    put_vec(w, W);
    return w.take();
}

IssuerPublicKey IssuerPublicKey::decode(const PublicParams& pp, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagPublicKey, kVersion);
    std::size_t off = r.offset();
    auto d = r.raw(32);
    auto expect = pp.digest();
    if (!std::equal(d.begin(), d.end(), expect.begin())) throw DecodeError("key made for other parameters", off);
    const auto& ctx = pp.group();
    IssuerPublicKey pk{pp, get_g2(r, ctx), get_g2(r, ctx), get_g1s(r, ctx), get_g2s(r, ctx)};
    r.expect_end();
    if (pk.Z.empty() || pk.Z.size() != pk.W.size()) throw DecodeError("key bases mismatch", off);
    return pk;
}

Scalar IssuerPublicKey::fingerprint() const {
    std::vector<Bytes> in{encode()};
    return hash_to_scalar(pp, "zkfaith/cl/fingerprint", in);
}

bool IssuerPublicKey::well_formed() const {
    if (X.is_identity() || Y.is_identity() || Z.empty() || Z.size() != W.size()) return false;
    for (std::size_t i = 0; i < Z.size(); ++i) {
        if (Z[i].is_identity() || !pair_eq(Z[i], Y, pp.g, W[i])) return false;
    }
    return true;
}

Bytes Signature::encode() const {
    ByteWriter w;
    put_header(w, kTagSignature, kVersion);
    put(w, a);
    put_vec(w, A);
    put(w, b);
    put_vec(w, B);
    put(w, c);
    return w.take();
}

Signature Signature::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    expect_header(r, kTagSignature, kVersion);
    Signature s;
    s.a = get_g1(r, ctx);
    s.A = get_g1s(r, ctx);
    s.b = get_g1(r, ctx);
    s.B = get_g1s(r, ctx);
    s.c = get_g1(r, ctx);
    r.expect_end();
    return s;
}

}  // namespace zkfaith
