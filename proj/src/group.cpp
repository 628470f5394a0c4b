#include "zkfaith/group.hpp"

#include <map>
#include <mutex>

#include "zkfaith/errors.hpp"
#include "zkfaith/hash.hpp"

namespace zkfaith {
namespace {

constexpr std::uint8_t kParamsVersion = 1;

mpz_class mpz_from_bytes(std::span<const std::uint8_t> b) {
    mpz_class v;
    if (!b.empty()) mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
    return v;
}

Bytes mpz_to_bytes(const mpz_class& v, std::size_t width) {
    Bytes out(width, 0);
    std::size_t n = 0;
    std::size_t need = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    if (v == 0) return out;
    if (need > width) throw UsageError("integer does not fit the encoding width");
    mpz_export(out.data() + (width - need), &n, 1, 1, 1, 0, v.get_mpz_t());
    return out;
}

mpz_class mod(const mpz_class& v, const mpz_class& q) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), q.get_mpz_t());
    return r;
}

mpz_class limbs_to_mpz(const bn254::Limbs& l) {
    mpz_class v;
    mpz_import(v.get_mpz_t(), 4, -1, 8, 0, 0, l.data());
    return v;
}

std::size_t width_of(const mpz_class& q) { return (mpz_sizeinbase(q.get_mpz_t(), 2) + 7) / 8; }

void same(const GroupContext* a, const GroupContext* b) {
    if (a == nullptr || b == nullptr) throw UsageError("uninitialized group element");
    if (a != b) throw UsageError("elements belong to different groups (" + a->id + " vs " + b->id + ")");
}

const GroupContext& need(const GroupContext* c) {
    if (c == nullptr) throw UsageError("uninitialized group element");
    return *c;
}

bool is_mock(const GroupContext* c) { return need(c).backend == Backend::mock; }

template <class Point>
Point mul_point(const Point& p, const Scalar& k) {
    auto l = k.limbs();
    return p.mul(l);
}

}  // namespace

std::string_view to_string(Backend b) { return b == Backend::curve ? "curve" : "mock"; }
std::string_view to_string(SecurityLevel l) { return l == SecurityLevel::toy ? "toy" : "standard"; }

Backend parse_backend(std::string_view s) {
    if (s == "curve") return Backend::curve;
    if (s == "mock") return Backend::mock;
    throw ConfigError("unknown backend '" + std::string(s) + "'");
}

SecurityLevel parse_level(std::string_view s) {
    if (s == "toy") return SecurityLevel::toy;
    if (s == "standard") return SecurityLevel::standard;
    throw ConfigError("unknown security level '" + std::string(s) + "'");
}

const GroupContext& curve_context() {
    static const GroupContext ctx = [] {
        mpz_class r = limbs_to_mpz(bn254::group_order());
        // ~100 bits after the tower-NFS improvements on BN curves
        return GroupContext{Backend::curve, "bn254", r, width_of(r), 100};
    }();
    return ctx;
}

const GroupContext& mock_context(const mpz_class& q) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<GroupContext>> interned;
    if (q < 3 || mpz_probab_prime_p(q.get_mpz_t(), 40) == 0) {
        throw ConfigError("mock group order must be an odd prime, got " + q.get_str());
    }
    std::string id = "mock-" + q.get_str();
    std::lock_guard lock(mu);
    auto& slot = interned[id];
    if (!slot) slot = std::make_unique<GroupContext>(GroupContext{Backend::mock, id, q, width_of(q), 0});
    return *slot;
}

// ---- Scalar

Scalar::Scalar(const GroupContext& ctx, const mpz_class& v) : ctx_(&ctx), v_(mod(v, ctx.order)) {}

Scalar Scalar::from_int(const GroupContext& ctx, long long v) {
    mpz_class m;
    if (v < 0) {
        m = static_cast<unsigned long>(-(v + 1));
        m = -m - 1;
    } else {
        m = static_cast<unsigned long>(v);
    }
    return Scalar(ctx, m);
}

Scalar Scalar::random(const GroupContext& ctx, Rng& rng) {
    // 64 extra bits make the modular bias negligible
    std::vector<std::uint8_t> buf(ctx.scalar_width + 8);
    rng.fill(buf);
    return Scalar(ctx, mpz_from_bytes(buf));
}

Scalar Scalar::random_nonzero(const GroupContext& ctx, Rng& rng) {
    for (;;) {
        Scalar s = random(ctx, rng);
        if (!s.is_zero()) return s;
    }
}

Scalar Scalar::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    if (bytes.size() != ctx.scalar_width) {
        throw DecodeError("scalar must be " + std::to_string(ctx.scalar_width) + " bytes", 0);
    }
    mpz_class v = mpz_from_bytes(bytes);
    if (v >= ctx.order) throw DecodeError("scalar not reduced", 0);
    return Scalar(ctx, v);
}

const GroupContext& Scalar::context() const { return need(ctx_); }

Scalar Scalar::operator+(const Scalar& o) const {
    same(ctx_, o.ctx_);
    mpz_class r = v_ + o.v_;
    if (r >= ctx_->order) r -= ctx_->order;
    Scalar s;
    s.ctx_ = ctx_;
    s.v_ = std::move(r);
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const {
    same(ctx_, o.ctx_);
    mpz_class r = v_ - o.v_;
    if (r < 0) r += ctx_->order;
    Scalar s;
    s.ctx_ = ctx_;
    s.v_ = std::move(r);
    return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
    same(ctx_, o.ctx_);
    return Scalar(*ctx_, v_ * o.v_);
}

Scalar Scalar::operator-() const { return Scalar::zero(context()) - *this; }

Scalar Scalar::inverse() const {
    if (is_zero()) throw UsageError("inverse of zero scalar");
    mpz_class r;
    mpz_invert(r.get_mpz_t(), v_.get_mpz_t(), context().order.get_mpz_t());
    return Scalar(*ctx_, r);
}

bool Scalar::operator==(const Scalar& o) const { return ctx_ == o.ctx_ && v_ == o.v_; }

Bytes Scalar::encode() const { return mpz_to_bytes(v_, context().scalar_width); }

bn254::Limbs Scalar::limbs() const {
    bn254::Limbs l{};
    if (v_ == 0) return l;
    if (mpz_sizeinbase(v_.get_mpz_t(), 2) > 256) throw UsageError("scalar wider than 256 bits");
    std::size_t n = 0;
    mpz_export(l.data(), &n, -1, 8, 0, 0, v_.get_mpz_t());
    return l;
}

// ---- G1

G1 G1::identity(const GroupContext& ctx) {
    G1 p;
    p.ctx_ = &ctx;
    return p;
}

G1 G1::generator(const GroupContext& ctx) {
    G1 p;
    p.ctx_ = &ctx;
    if (ctx.backend == Backend::mock) p.exp_ = 1;
    else p.pt_ = bn254::g1_generator();
    return p;
}

G1 G1::from_exponent(const Scalar& e) {
    if (!is_mock(&e.context())) throw UsageError("from_exponent is only available on the mock backend");
    G1 p;
    p.ctx_ = &e.context();
    p.exp_ = e.value();
    return p;
}

G1 G1::from_point(const GroupContext& ctx, const bn254::G1Point& pt) {
    if (ctx.backend != Backend::curve) throw UsageError("from_point is only available on the curve backend");
    G1 p;
    p.ctx_ = &ctx;
    p.pt_ = pt;
    return p;
}

G1 G1::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    if (ctx.backend == Backend::mock) return from_exponent(Scalar::decode(ctx, bytes));
    if (bytes.size() != 32) throw DecodeError("G1 element must be 32 bytes", 0);
    auto pt = bn254::g1_decode(bytes);
    if (!pt) throw DecodeError("invalid G1 encoding", 0);
    G1 p;
    p.ctx_ = &ctx;
    p.pt_ = *pt;
    return p;
}

const GroupContext& G1::context() const { return need(ctx_); }

bool G1::is_identity() const { return is_mock(ctx_) ? exp_ == 0 : pt_.is_identity(); }

std::optional<Scalar> G1::exponent() const {
    if (!is_mock(ctx_)) return std::nullopt;
    return Scalar(*ctx_, exp_);
}

G1 G1::operator+(const G1& o) const {
    same(ctx_, o.ctx_);
    G1 r;
    r.ctx_ = ctx_;
    if (ctx_->backend == Backend::mock) r.exp_ = mod(exp_ + o.exp_, ctx_->order);
    else r.pt_ = pt_ + o.pt_;
    return r;
}

G1 G1::operator-() const {
    G1 r;
    r.ctx_ = &need(ctx_);
    if (ctx_->backend == Backend::mock) r.exp_ = mod(-exp_, ctx_->order);
    else r.pt_ = -pt_;
    return r;
}

G1 G1::operator-(const G1& o) const { return *this + (-o); }

G1 G1::operator*(const Scalar& k) const {
    same(ctx_, &k.context());
    G1 r;
    r.ctx_ = ctx_;
    if (ctx_->backend == Backend::mock) r.exp_ = mod(exp_ * k.value(), ctx_->order);
    else r.pt_ = mul_point(pt_, k);
    return r;
}

bool G1::operator==(const G1& o) const {
    if (ctx_ != o.ctx_) return false;
    if (ctx_ == nullptr) return true;
    return ctx_->backend == Backend::mock ? exp_ == o.exp_ : pt_ == o.pt_;
}

Bytes G1::encode() const {
    if (is_mock(ctx_)) return mpz_to_bytes(exp_, ctx_->scalar_width);
    auto e = bn254::g1_encode(pt_);
    return Bytes(e.begin(), e.end());
}

G1 msm(std::span<const G1> points, std::span<const Scalar> scalars) {
    if (points.empty() || points.size() != scalars.size()) throw UsageError("msm needs equally long, non-empty inputs");
    const GroupContext* ctx = points[0].ctx_;
    for (std::size_t i = 0; i < points.size(); ++i) {
        same(ctx, points[i].ctx_);
        same(ctx, &scalars[i].context());
    }
    if (ctx->backend == Backend::mock) {
        mpz_class acc = 0;
        for (std::size_t i = 0; i < points.size(); ++i) acc += points[i].exp_ * scalars[i].value();
        G1 r;
        r.ctx_ = ctx;
        r.exp_ = mod(acc, ctx->order);
        return r;
    }
    // Straus: one shared chain of doublings, a 4-bit table per point.
    std::size_t n = points.size();
    std::vector<std::array<bn254::G1Point, 16>> tables(n);
    std::vector<bn254::Limbs> ks(n);
    for (std::size_t i = 0; i < n; ++i) {
        tables[i][0] = bn254::G1Point::identity();
        for (int j = 1; j < 16; ++j) tables[i][j] = tables[i][j - 1] + points[i].pt_;
        ks[i] = scalars[i].limbs();
    }
    bn254::G1Point acc = bn254::G1Point::identity();
    for (int limb = 3; limb >= 0; --limb) {
        for (int nib = 15; nib >= 0; --nib) {
            acc = acc.dbl().dbl().dbl().dbl();
            for (std::size_t i = 0; i < n; ++i) {
                unsigned w = (ks[i][limb] >> (4 * nib)) & 0xF;
                if (w) acc = acc + tables[i][w];
            }
        }
    }
    G1 r;
    r.ctx_ = ctx;
    r.pt_ = acc;
    return r;
}

// ---- G2

struct G2::Cache {
    std::once_flag once;
    bn254::G2Prepared prepared;
};

G2::G2(const GroupContext* ctx, mpz_class exp, const bn254::G2Point& pt)
    : ctx_(ctx), exp_(std::move(exp)), pt_(pt) {
    if (ctx_->backend == Backend::curve) cache_ = std::make_shared<Cache>();
}

G2 G2::identity(const GroupContext& ctx) { return G2(&ctx, 0, bn254::G2Point::identity()); }

G2 G2::generator(const GroupContext& ctx) {
    if (ctx.backend == Backend::mock) return G2(&ctx, 1, bn254::G2Point::identity());
    return G2(&ctx, 0, bn254::g2_generator());
}

G2 G2::from_exponent(const Scalar& e) {
    if (!is_mock(&e.context())) throw UsageError("from_exponent is only available on the mock backend");
    return G2(&e.context(), e.value(), bn254::G2Point::identity());
}

G2 G2::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    if (ctx.backend == Backend::mock) return from_exponent(Scalar::decode(ctx, bytes));
    if (bytes.size() != 64) throw DecodeError("G2 element must be 64 bytes", 0);
    auto pt = bn254::g2_decode(bytes);
    if (!pt) throw DecodeError("invalid G2 encoding", 0);
    return G2(&ctx, 0, *pt);
}

const GroupContext& G2::context() const { return need(ctx_); }

bool G2::is_identity() const { return is_mock(ctx_) ? exp_ == 0 : pt_.is_identity(); }

std::optional<Scalar> G2::exponent() const {
    if (!is_mock(ctx_)) return std::nullopt;
    return Scalar(*ctx_, exp_);
}

G2 G2::operator+(const G2& o) const {
    same(ctx_, o.ctx_);
    if (ctx_->backend == Backend::mock) return G2(ctx_, mod(exp_ + o.exp_, ctx_->order), pt_);
    return G2(ctx_, 0, pt_ + o.pt_);
}

G2 G2::operator-() const {
    if (is_mock(ctx_)) return G2(ctx_, mod(-exp_, ctx_->order), pt_);
    return G2(ctx_, 0, -pt_);
}

G2 G2::operator-(const G2& o) const { return *this + (-o); }

G2 G2::operator*(const Scalar& k) const {
    same(ctx_, &k.context());
    if (ctx_->backend == Backend::mock) return G2(ctx_, mod(exp_ * k.value(), ctx_->order), pt_);
    return G2(ctx_, 0, mul_point(pt_, k));
}

bool G2::operator==(const G2& o) const {
    if (ctx_ != o.ctx_) return false;
    if (ctx_ == nullptr) return true;
    return ctx_->backend == Backend::mock ? exp_ == o.exp_ : pt_ == o.pt_;
}

Bytes G2::encode() const {
    if (is_mock(ctx_)) return mpz_to_bytes(exp_, ctx_->scalar_width);
    auto e = bn254::g2_encode(pt_);
    return Bytes(e.begin(), e.end());
}

const bn254::G2Prepared& G2::prepared() const {
    if (is_mock(ctx_)) throw UsageError("prepared lines exist only on the curve backend");
    std::call_once(cache_->once, [this] { cache_->prepared = bn254::prepare_g2(pt_); });
    return cache_->prepared;
}

// ---- GT

GT GT::identity(const GroupContext& ctx) {
    GT t;
    t.ctx_ = &ctx;
    return t;
}

GT GT::from_exponent(const Scalar& e) {
    if (!is_mock(&e.context())) throw UsageError("from_exponent is only available on the mock backend");
    GT t;
    t.ctx_ = &e.context();
    t.exp_ = e.value();
    return t;
}

GT GT::decode(const GroupContext& ctx, std::span<const std::uint8_t> bytes) {
    if (ctx.backend == Backend::mock) return from_exponent(Scalar::decode(ctx, bytes));
    if (bytes.size() != 384) throw DecodeError("GT element must be 384 bytes", 0);
    auto f = bn254::gt_decode(bytes);
    if (!f) throw DecodeError("invalid GT encoding", 0);
    GT t;
    t.ctx_ = &ctx;
    t.f_ = *f;
    return t;
}

const GroupContext& GT::context() const { return need(ctx_); }

bool GT::is_identity() const { return is_mock(ctx_) ? exp_ == 0 : f_.is_one(); }

std::optional<Scalar> GT::exponent() const {
    if (!is_mock(ctx_)) return std::nullopt;
    return Scalar(*ctx_, exp_);
}

GT GT::operator*(const GT& o) const {
    same(ctx_, o.ctx_);
    GT t;
    t.ctx_ = ctx_;
    if (ctx_->backend == Backend::mock) t.exp_ = mod(exp_ + o.exp_, ctx_->order);
    else t.f_ = f_ * o.f_;
    return t;
}

GT GT::inverse() const {
    GT t;
    t.ctx_ = &need(ctx_);
    // unitary after the final exponentiation, so the inverse is the conjugate
    if (ctx_->backend == Backend::mock) t.exp_ = mod(-exp_, ctx_->order);
    else t.f_ = f_.conj();
    return t;
}

GT GT::pow(const Scalar& k) const {
    same(ctx_, &k.context());
    GT t;
    t.ctx_ = ctx_;
    if (ctx_->backend == Backend::mock) t.exp_ = mod(exp_ * k.value(), ctx_->order);
    else t.f_ = f_.pow(k.limbs());
    return t;
}

bool GT::operator==(const GT& o) const {
    if (ctx_ != o.ctx_) return false;
    if (ctx_ == nullptr) return true;
    return ctx_->backend == Backend::mock ? exp_ == o.exp_ : f_ == o.f_;
}

Bytes GT::encode() const {
    if (is_mock(ctx_)) return mpz_to_bytes(exp_, ctx_->scalar_width);
    auto e = bn254::gt_encode(f_);
    return Bytes(e.begin(), e.end());
}

// ---- pairing

GT pair(const G1& u, const G2& v) {
    std::array<G1, 1> us{u};
    std::array<G2, 1> vs{v};
    return pair_product(us, vs);
}

namespace {

bn254::Fp12 miller_product(std::span<const G1> us, std::span<const G2> vs) {
    std::vector<bn254::G1Affine> ps;
    std::vector<const bn254::G2Prepared*> qs;
    ps.reserve(us.size());
    qs.reserve(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) {
        if (us[i].is_identity() || vs[i].is_identity()) continue;
        ps.push_back(us[i].point().to_affine());
        qs.push_back(&vs[i].prepared());
    }
    if (ps.empty()) return bn254::Fp12::one();
    return bn254::multi_miller_prepared(ps, qs);
}

}  // namespace

GT pair_product(std::span<const G1> us, std::span<const G2> vs) {
    if (us.empty() || us.size() != vs.size()) throw UsageError("pairing product needs equally long, non-empty inputs");
    const GroupContext* ctx = &us[0].context();
    for (std::size_t i = 0; i < us.size(); ++i) {
        same(ctx, &us[i].context());
        same(ctx, &vs[i].context());
    }
    GT t;
    t.ctx_ = ctx;
    if (ctx->backend == Backend::mock) {
        mpz_class acc = 0;
        for (std::size_t i = 0; i < us.size(); ++i) acc += us[i].exponent()->value() * vs[i].exponent()->value();
        t.exp_ = mod(acc, ctx->order);
        return t;
    }
    t.f_ = bn254::final_exponentiation(miller_product(us, vs));
    return t;
}

bool pairing_product_is_identity(std::span<const G1> us, std::span<const G2> vs) {
    return pair_product(us, vs).is_identity();
}

G1 psi(const G2& v) {
    auto e = v.exponent();
    if (!e) throw UsageError("psi is only available on the mock backend");
    return G1::from_exponent(*e);
}

// ---- parameters

namespace {

PublicParams make_params(const GroupContext& ctx, SecurityLevel level) {
    PublicParams pp;
    pp.ctx = &ctx;
    pp.level = level;
    pp.g = G1::generator(ctx);
    pp.h = G2::generator(ctx);
    pp.gt = pair(pp.g, pp.h);
    return pp;
}

}  // namespace

PublicParams setup(SecurityLevel level, Backend backend) {
    if (backend == Backend::curve) {
        if (level != SecurityLevel::standard) {
            throw ConfigError("the curve backend supports only the standard security level");
        }
        static const PublicParams pp = make_params(curve_context(), SecurityLevel::standard);
        return pp;
    }
    if (level == SecurityLevel::toy) return make_params(mock_context(101), level);
    mpz_class q = 1;
    q <<= 127;
    q -= 1;
    return make_params(mock_context(q), level);
}

PublicParams setup_mock(const mpz_class& q) {
    const GroupContext& ctx = mock_context(q);
    return make_params(ctx, q == 101 ? SecurityLevel::toy : SecurityLevel::standard);
}

Bytes PublicParams::encode() const {
    ByteWriter w;
    w.u8(kParamsVersion)
        .str(to_string(backend()))
        .str(to_string(level))
        .bytes(mpz_to_bytes(q(), ctx->scalar_width))
        .bytes(g.encode())
        .bytes(h.encode())
        .bytes(gt.encode());
    return w.take();
}

PublicParams PublicParams::decode(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    std::uint8_t version = r.u8();
    if (version != kParamsVersion) throw VersionError("unsupported parameter version " + std::to_string(version));
    Backend backend = parse_backend(r.str());
    SecurityLevel level = parse_level(r.str());
    mpz_class q = mpz_from_bytes(r.bytes());
    Bytes g = r.bytes(), h = r.bytes(), gt = r.bytes();
    r.expect_end();

    PublicParams pp;
    if (backend == Backend::curve) {
        pp = setup(level, backend);
        if (q != pp.q()) throw ConfigError("curve parameters carry a foreign group order");
    } else {
        pp = setup_mock(q);
        pp.level = level;
    }
    // The generators are fixed; anything else is a different parameter set.
    if (g != pp.g.encode() || h != pp.h.encode() || gt != pp.gt.encode()) {
        throw ConfigError("public parameters do not match the canonical generators");
    }
    return pp;
}

std::array<std::uint8_t, 32> PublicParams::digest() const { return sha256(encode()); }

Scalar hash_to_scalar(const PublicParams& pp, std::string_view domain_tag, std::span<const Bytes> inputs) {
    auto d = sha512(encode_parts(domain_tag, inputs));
    return Scalar(pp.group(), mpz_from_bytes(d));
}

G1 hash_to_g1(const PublicParams& pp, std::string_view domain_tag, std::span<const Bytes> inputs) {
    if (pp.backend() == Backend::curve) {
        auto seed = sha512(encode_parts(domain_tag, inputs));
        return G1::from_point(pp.group(), bn254::g1_from_seed(seed));
    }
    std::vector<Bytes> parts(inputs.begin(), inputs.end());
    parts.push_back({});
    for (std::uint32_t ctr = 0;; ++ctr) {
        ByteWriter w;
        w.u32(ctr);
        parts.back() = w.take();
        Scalar e = hash_to_scalar(pp, domain_tag, parts);
        if (!e.is_zero()) return G1::from_exponent(e);
    }
}

}  // namespace zkfaith
