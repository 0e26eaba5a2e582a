// Dense univariate helpers over an arbitrary Field: gcd, radical,
// distinct-degree factor profiles, exhaustive root search. Input sizes here
// are eliminants of Artinian quotients, so everything stays tiny.
#pragma once

#include <vector>

#include "ratdeg/error.hpp"
#include "ratdeg/field.hpp"

namespace ratdeg {

// Little-endian coefficient vector; trailing zeros trimmed.
struct UnivPoly {
    Field field;
    std::vector<FieldElement> c;

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    FieldElement eval(const FieldElement& x) const {
        FieldElement v = field.zero();
        for (int i = deg(); i >= 0; --i) v = field.add(field.mul(v, x), c[i]);
        return v;
    }
};

namespace uvdetail {

inline UnivPoly uv_make(const Field& f, std::vector<FieldElement> c) {
    UnivPoly p{f, std::move(c)};
    p.trim();
    return p;
}

inline UnivPoly uv_mul(const UnivPoly& a, const UnivPoly& b) {
    const Field& f = a.field;
    if (a.is_zero() || b.is_zero()) return uv_make(f, {});
    std::vector<FieldElement> r(a.c.size() + b.c.size() - 1, f.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r[i + j] = f.add(r[i + j], f.mul(a.c[i], b.c[j]));
    return uv_make(f, std::move(r));
}

inline UnivPoly uv_monic(UnivPoly a) {
    a.trim();
    if (a.is_zero()) return a;
    FieldElement inv = a.field.inv(a.c.back());
    for (auto& x : a.c) x = a.field.mul(x, inv);
    return a;
}

inline UnivPoly uv_rem(UnivPoly a, const UnivPoly& m) {
    const Field& f = a.field;
    a.trim();
    const int dm = m.deg();
    FieldElement lead_inv = f.inv(m.c.back());
    while (dm >= 0 && a.deg() >= dm) {
        FieldElement q = f.mul(a.c.back(), lead_inv);
        int shift = a.deg() - dm;
        for (int i = 0; i <= dm; ++i)
            a.c[i + shift] = f.sub(a.c[i + shift], f.mul(q, m.c[i]));
        a.trim();
    }
    return a;
}

inline UnivPoly uv_divexact(const UnivPoly& a, const UnivPoly& b) {
    const Field& f = a.field;
    UnivPoly rem = a;
    rem.trim();
    std::vector<FieldElement> q(std::max<std::size_t>(1, a.c.size()), f.zero());
    FieldElement lead_inv = f.inv(b.c.back());
    const int db = b.deg();
    while (rem.deg() >= db) {
        FieldElement c = f.mul(rem.c.back(), lead_inv);
        int shift = rem.deg() - db;
        q[shift] = c;
        for (int i = 0; i <= db; ++i)
            rem.c[i + shift] = f.sub(rem.c[i + shift], f.mul(c, b.c[i]));
        rem.trim();
    }
    if (!rem.is_zero()) throw Error(Errc::internal, "exact division left a remainder");
    return uv_make(f, std::move(q));
}

inline UnivPoly uv_gcd(UnivPoly a, UnivPoly b) {
    a.trim();
    b.trim();
    while (!b.is_zero()) {
        UnivPoly r = uv_rem(a, uv_monic(b));
        a = std::move(b);
        b = std::move(r);
    }
    return uv_monic(std::move(a));
}

inline UnivPoly uv_derivative(const UnivPoly& a) {
    const Field& f = a.field;
    std::vector<FieldElement> d;
    for (std::size_t i = 1; i < a.c.size(); ++i)
        d.push_back(f.mul(a.c[i], f.from_int(static_cast<long long>(i))));
    return uv_make(f, std::move(d));
}

inline UnivPoly uv_powmod(UnivPoly base, std::uint64_t e, const UnivPoly& m) {
    const Field& f = base.field;
    UnivPoly r = uv_make(f, {f.one()});
    base = uv_rem(std::move(base), m);
    while (e) {
        if (e & 1) r = uv_rem(uv_mul(r, base), m);
        base = uv_rem(uv_mul(base, base), m);
        e >>= 1;
    }
    return r;
}

}  // namespace uvdetail

// Product of the distinct irreducible factors. Handles inseparable input by
// taking p-th roots of coefficients (Frobenius is bijective on a finite field).
inline UnivPoly radical(UnivPoly f) {
    using namespace uvdetail;
    const Field& F = f.field;
    f.trim();
    if (f.deg() <= 0) return uv_make(F, {F.one()});
    f = uv_monic(std::move(f));
    UnivPoly df = uv_derivative(f);
    if (df.is_zero()) {
        // f = g(x^p); replace by the p-th root polynomial
        const std::uint64_t p = F.characteristic();
        auto card = F.cardinality();
        if (!card) throw Error(Errc::field_too_large, "p-th root needs bounded field");
        std::vector<FieldElement> g;
        for (std::size_t i = 0; i < f.c.size(); i += static_cast<std::size_t>(p))
            g.push_back(F.pow(f.c[i], *card / p));  // a^(q/p) is the p-th root
        return radical(uv_make(F, std::move(g)));
    }
    UnivPoly u = uv_gcd(f, df);
    UnivPoly v = uv_divexact(f, u);  // distinct factors with multiplicity prime to p
    // strip v-factors from u, leaving the p-power-multiplicity part
    UnivPoly h = u;
    for (;;) {
        UnivPoly g = uv_gcd(h, v);
        if (g.deg() <= 0) break;
        h = uv_divexact(h, g);
    }
    if (h.deg() <= 0) return uv_monic(std::move(v));
    return uv_mul(uv_monic(std::move(v)), radical(std::move(h)));
}

// Degrees of the distinct irreducible factors (with repetition per factor),
// via distinct-degree factorization of the radical.
inline std::vector<unsigned> irreducible_factor_degrees(const UnivPoly& f) {
    using namespace uvdetail;
    const Field& F = f.field;
    UnivPoly r = radical(f);
    auto card = F.cardinality();
    if (!card) throw Error(Errc::field_too_large, "factor profile needs bounded field");
    std::vector<unsigned> degrees;
    UnivPoly x = uv_make(F, {F.zero(), F.one()});
    UnivPoly h = uv_rem(x, r);
    unsigned d = 0;
    while (r.deg() > 0) {
        ++d;
        if (static_cast<int>(d) > r.deg()) break;
        h = uv_powmod(std::move(h), *card, r);
        UnivPoly hx = h;
        // h - x
        if (hx.c.size() < 2) hx.c.resize(2, F.zero());
        hx.c[1] = F.sub(hx.c[1], F.one());
        hx.trim();
        UnivPoly g = uv_gcd(hx, r);
        if (g.deg() > 0) {
            for (int i = 0; i < g.deg() / static_cast<int>(d); ++i) degrees.push_back(d);
            r = uv_divexact(r, g);
            h = uv_rem(std::move(h), r);
        }
    }
    if (r.deg() > 0) degrees.push_back(static_cast<unsigned>(r.deg()));
    return degrees;
}

// All distinct roots in the coefficient field, by exhaustive search.
inline std::vector<FieldElement> roots_in_field(const UnivPoly& f) {
    std::vector<FieldElement> out;
    for (const FieldElement& x : f.field.enumerate())
        if (f.eval(x).is_zero()) out.push_back(x);
    return out;
}

// Coefficient embedding into an extension.
inline UnivPoly embed_univ(const UnivPoly& f, const FieldEmbedding& emb) {
    std::vector<FieldElement> c;
    c.reserve(f.c.size());
    for (const auto& x : f.c) c.push_back(emb(x));
    UnivPoly r{emb.target(), std::move(c)};
    r.trim();
    return r;
}

}  // namespace ratdeg
