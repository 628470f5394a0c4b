// Optimal ate pairing on BN254.
//
// The Miller loop walks the twist point in affine coordinates. A line through
// twist points with slope l, evaluated at P = (xP, yP) after untwisting
// (x, y) -> (x w^2, y w^3), is
//     yP - l xP w + (l x1 - y1) w^3
// Vertical lines land in Fp6 and vanish under the final exponentiation, so
// they are skipped.

#include "zkfaith/bn254/curve.hpp"

namespace zkfaith::bn254 {
namespace {

// 6u + 2 for u = 4965661367192848881
constexpr unsigned __int128 kAteLoop =
    (static_cast<unsigned __int128>(0x1ULL) << 64) | 0x9d797039be763ba8ULL;

// (p^4 - p^2 + 1) / r
constexpr std::array<std::uint64_t, 12> kHardExponent = {
    0xe81bb482ccdf42b1ULL, 0x5abf5cc4f49c36d4ULL, 0xf1154e7e1da014fdULL, 0xdcc7b44c87cdbacfULL,
    0xaaa441e3954bcf8aULL, 0x6b887d56d5095f23ULL, 0x79581e16f3fd90c6ULL, 0x3b1b1355d189227dULL,
    0x4e529a5861876f6bULL, 0x6c0eb522d5b12278ULL, 0x331ec15183177fafULL, 0x01baaa710b0759adULL};

struct LineState {
    Fp2 x, y;
    bool infinity = false;
};

Fp12 line_value(const Fp2& slope, const Fp2& x1, const Fp2& y1, const G1Affine& p) {
    Fp12 l = Fp12::zero();
    l.c0.c0 = Fp2{p.y, Fp::zero()};
    l.c1.c0 = -(slope * p.x);
    l.c1.c1 = slope * x1 - y1;
    return l;
}

// Doubles t in place and returns the tangent line at the old t.
std::optional<Fp12> step_double(LineState& t, const G1Affine& p) {
    if (t.infinity) return std::nullopt;
    if (t.y.is_zero()) {
        t.infinity = true;
        return std::nullopt;
    }
    Fp2 xx = t.x.square();
    Fp2 slope = (xx.dbl() + xx) * t.y.dbl().inverse();
    Fp12 l = line_value(slope, t.x, t.y, p);
    Fp2 x3 = slope.square() - t.x.dbl();
    Fp2 y3 = slope * (t.x - x3) - t.y;
    t.x = x3;
    t.y = y3;
    return l;
}

// Adds q to t in place and returns the chord through them.
std::optional<Fp12> step_add(LineState& t, const G2Affine& q, const G1Affine& p) {
    if (q.infinity) return std::nullopt;
    if (t.infinity) {
        t = {q.x, q.y, false};
        return std::nullopt;
    }
    if (t.x == q.x) {
        if (t.y == q.y) return step_double(t, p);
        t.infinity = true;
        return std::nullopt;
    }
    Fp2 slope = (q.y - t.y) * (q.x - t.x).inverse();
    Fp12 l = line_value(slope, t.x, t.y, p);
    Fp2 x3 = slope.square() - t.x - q.x;
    Fp2 y3 = slope * (t.x - x3) - t.y;
    t.x = x3;
    t.y = y3;
    return l;
}

G2Affine twist_frobenius(const G2Affine& q) {
    if (q.infinity) return q;
    return {q.x.conj() * twist_frobenius_x(), q.y.conj() * twist_frobenius_y(), false};
}

Fp12 multi_miller(std::span<const G1Affine> ps, std::span<const G2Affine> qs) {
    std::vector<LineState> ts;
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        if (ps[k].infinity || qs[k].infinity) continue;
        active.push_back(k);
        ts.push_back({qs[k].x, qs[k].y, false});
    }
    Fp12 f = Fp12::one();
    if (active.empty()) return f;

    int top = 127;
    while (!((kAteLoop >> top) & 1)) --top;
    for (int bit = top - 1; bit >= 0; --bit) {
        f = f.square();
        for (std::size_t n = 0; n < active.size(); ++n) {
            if (auto l = step_double(ts[n], ps[active[n]])) f *= *l;
        }
        if ((kAteLoop >> bit) & 1) {
            for (std::size_t n = 0; n < active.size(); ++n) {
                if (auto l = step_add(ts[n], qs[active[n]], ps[active[n]])) f *= *l;
            }
        }
    }
    for (std::size_t n = 0; n < active.size(); ++n) {
        const G1Affine& p = ps[active[n]];
        G2Affine q1 = twist_frobenius(qs[active[n]]);
        G2Affine q2 = twist_frobenius(q1);
        q2.y = -q2.y;
        if (auto l = step_add(ts[n], q1, p)) f *= *l;
        if (auto l = step_add(ts[n], q2, p)) f *= *l;
    }
    return f;
}

Fp6 mul_by_01(const Fp6& x, const Fp2& b, const Fp2& c) {
    Fp2 t0 = x.c0 * b;
    Fp2 t1 = x.c1 * c;
    return {((x.c1 + x.c2) * c - t1).mul_by_xi() + t0, (x.c0 + x.c1) * (b + c) - t0 - t1,
            (x.c0 + x.c2) * b - t0 + t1};
}

// f * (yP + b w + c w^3)
Fp12 mul_by_line(const Fp12& f, const Fp& yp, const Fp2& b, const Fp2& c) {
    auto scale = [&](const Fp6& x) { return Fp6{x.c0 * yp, x.c1 * yp, x.c2 * yp}; };
    Fp12 r;
    r.c0 = scale(f.c0) + mul_by_01(f.c1, b, c).mul_by_v();
    r.c1 = mul_by_01(f.c0, b, c) + scale(f.c1);
    return r;
}

// u = 4965661367192848881
constexpr std::uint64_t kU = 0x44e992b44a6909f1ULL;

Fp12 exp_by_u(const Fp12& f) { return f.pow(std::span(&kU, 1)); }

}  // namespace

G2Prepared prepare_g2(const G2Point& q) {
    G2Prepared out;
    G2Affine qa = q.to_affine();
    if (qa.infinity) return out;
    out.infinity = false;
    auto record = [&](const std::optional<Fp12>& l) {
        LineCoeffs c;
        if (l) {
            c.slope = -l->c1.c0;  // evaluated at xP = 1
            c.c3 = l->c1.c1;
            c.present = true;
        }
        out.lines.push_back(c);
    };
    // Lines are recorded at xP = 1 and rescaled per P during evaluation.
    G1Affine one_x{Fp::one(), Fp::zero(), false};
    LineState t{qa.x, qa.y, false};
    int top = 127;
    while (!((kAteLoop >> top) & 1)) --top;
    for (int bit = top - 1; bit >= 0; --bit) {
        record(step_double(t, one_x));
        if ((kAteLoop >> bit) & 1) record(step_add(t, qa, one_x));
    }
    G2Affine q1 = twist_frobenius(qa);
    G2Affine q2 = twist_frobenius(q1);
    q2.y = -q2.y;
    record(step_add(t, q1, one_x));
    record(step_add(t, q2, one_x));
    return out;
}

Fp12 multi_miller_prepared(std::span<const G1Affine> ps, std::span<const G2Prepared* const> qs) {
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        if (!ps[k].infinity && !qs[k]->infinity) active.push_back(k);
    }
    Fp12 f = Fp12::one();
    if (active.empty()) return f;
    std::size_t idx = 0;
    auto apply = [&](std::size_t line_index) {
        for (std::size_t k : active) {
            const LineCoeffs& c = qs[k]->lines[line_index];
            if (!c.present) continue;
            f = mul_by_line(f, ps[k].y, -(c.slope * ps[k].x), c.c3);
        }
    };
    int top = 127;
    while (!((kAteLoop >> top) & 1)) --top;
    for (int bit = top - 1; bit >= 0; --bit) {
        f = f.square();
        apply(idx++);
        if ((kAteLoop >> bit) & 1) apply(idx++);
    }
    apply(idx++);
    apply(idx++);
    return f;
}

Fp12 miller_loop(const G1Affine& p, const G2Affine& q) {
    return multi_miller(std::span(&p, 1), std::span(&q, 1));
}

namespace {

Fp12 easy_part(const Fp12& f) {
    // f^((p^6 - 1)(p^2 + 1))
    Fp12 t = f.conj() * f.inverse();
    return t.frobenius().frobenius() * t;
}

}  // namespace

Fp12 final_exponentiation_reference(const Fp12& f) { return easy_part(f).pow(kHardExponent); }

Fp12 final_exponentiation(const Fp12& f) {
    // Hard part (p^4 - p^2 + 1) / r written in base p with coefficients in u
    // (Devegili, Scott, Dahab). After the easy part, conj() is the inverse.
    Fp12 t1 = easy_part(f);
    Fp12 fp = t1.frobenius();
    Fp12 fp2 = fp.frobenius();
    Fp12 fp3 = fp2.frobenius();
    Fp12 fu = exp_by_u(t1);
    Fp12 fu2 = exp_by_u(fu);
    Fp12 fu3 = exp_by_u(fu2);
    Fp12 y3 = fu.frobenius().conj();
    Fp12 fu2p = fu2.frobenius();
    Fp12 fu3p = fu3.frobenius();
    Fp12 y2 = fu2.frobenius().frobenius();
    Fp12 y0 = fp * fp2 * fp3;
    Fp12 y1 = t1.conj();
    Fp12 y5 = fu2.conj();
    Fp12 y4 = (fu * fu2p).conj();
    Fp12 y6 = (fu3 * fu3p).conj();

    Fp12 t0 = y6.square() * y4 * y5;
    Fp12 s1 = y3 * y5 * t0;
    t0 = t0 * y2;
    s1 = (s1.square() * t0).square();
    t0 = s1 * y1;
    s1 = s1 * y0;
    return t0.square() * s1;
}

Fp12 pairing(const G1Point& p, const G2Point& q) {
    return final_exponentiation(miller_loop(p.to_affine(), q.to_affine()));
}

Fp12 multi_pairing(std::span<const G1Point> ps, std::span<const G2Point> qs) {
    std::vector<G1Affine> pa;
    std::vector<G2Prepared> prepared;
    std::vector<const G2Prepared*> qp;
    pa.reserve(ps.size());
    prepared.reserve(qs.size());
    for (std::size_t k = 0; k < ps.size(); ++k) {
        pa.push_back(ps[k].to_affine());
        prepared.push_back(prepare_g2(qs[k]));
    }
    for (const auto& p : prepared) qp.push_back(&p);
    return final_exponentiation(multi_miller_prepared(pa, qp));
}

}  // namespace zkfaith::bn254
