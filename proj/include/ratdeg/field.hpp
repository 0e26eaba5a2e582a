// Exact arithmetic in F_p and F_{p^k}. Extension fields store a monic
// irreducible minimal polynomial found by seeded random search; elements are
// canonical coefficient vectors, so equality is structural. All handles are
// immutable after construction and safe to share across threads.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ratdeg/error.hpp"
#include "ratdeg/rng.hpp"

namespace ratdeg {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

inline std::uint64_t inv_mod_prime(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) throw Error(Errc::division_by_zero, "inverse of zero");
    return powmod(a % p, p - 2, p);
}

// Dense univariate polynomials over Z/p, little-endian coefficients.
// Used for minimal-polynomial search and extension arithmetic.
using UPoly = std::vector<std::uint64_t>;

inline void up_trim(UPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int up_deg(const UPoly& f) { return static_cast<int>(f.size()) - 1; }

inline UPoly up_add(const UPoly& a, const UPoly& b, std::uint64_t p) {
    UPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint64_t v = 0;
        if (i < a.size()) v += a[i];
        if (i < b.size()) v += b[i];
        r[i] = v % p;
    }
    up_trim(r);
    return r;
}

inline UPoly up_sub(const UPoly& a, const UPoly& b, std::uint64_t p) {
    UPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint64_t av = i < a.size() ? a[i] : 0;
        std::uint64_t bv = i < b.size() ? b[i] : 0;
        r[i] = (av + p - bv) % p;
    }
    up_trim(r);
    return r;
}

inline UPoly up_mul(const UPoly& a, const UPoly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
        }
    }
    up_trim(r);
    return r;
}

// Remainder of a modulo monic m.
inline UPoly up_rem(UPoly a, const UPoly& m, std::uint64_t p) {
    up_trim(a);
    const int dm = up_deg(m);
    while (dm >= 0 && up_deg(a) >= dm) {
        std::uint64_t lead = a.back();
        int shift = up_deg(a) - dm;
        for (int i = 0; i <= dm; ++i) {
            a[i + shift] = (a[i + shift] + p - mulmod(lead, m[i], p)) % p;
        }
        up_trim(a);
    }
    return a;
}

inline UPoly up_monic(UPoly f, std::uint64_t p) {
    up_trim(f);
    if (f.empty()) return f;
    std::uint64_t c = inv_mod_prime(f.back(), p);
    for (auto& x : f) x = mulmod(x, c, p);
    return f;
}

inline UPoly up_gcd(UPoly a, UPoly b, std::uint64_t p) {
    up_trim(a);
    up_trim(b);
    while (!b.empty()) {
        UPoly r = up_rem(a, up_monic(b, p), p);
        a = std::move(b);
        b = std::move(r);
    }
    return up_monic(a, p);
}

// Extended gcd: returns (g, u) with u*a = g mod m, g = gcd(a, m).
inline std::pair<UPoly, UPoly> up_half_xgcd(UPoly a, UPoly m, std::uint64_t p) {
    UPoly r0 = std::move(m), r1 = std::move(a);
    UPoly u0 = {}, u1 = {1};
    up_trim(r0);
    up_trim(r1);
    while (!r1.empty()) {
        // divide r0 by r1
        UPoly q;
        UPoly rem = r0;
        UPoly r1m = r1;
        std::uint64_t lead_inv = inv_mod_prime(r1.back(), p);
        int d1 = up_deg(r1);
        while (up_deg(rem) >= d1) {
            int shift = up_deg(rem) - d1;
            std::uint64_t c = mulmod(rem.back(), lead_inv, p);
            if (static_cast<int>(q.size()) <= shift) q.resize(shift + 1, 0);
            q[shift] = (q[shift] + c) % p;
            for (int i = 0; i <= d1; ++i) {
                rem[i + shift] = (rem[i + shift] + p - mulmod(c, r1[i], p)) % p;
            }
            up_trim(rem);
        }
        UPoly u2 = up_sub(u0, up_mul(q, u1, p), p);
        r0 = std::move(r1);
        r1 = std::move(rem);
        u0 = std::move(u1);
        u1 = std::move(u2);
    }
    return {r0, u0};
}

inline UPoly up_powmod(UPoly base, std::uint64_t e, const UPoly& m, std::uint64_t p) {
    UPoly r = {1};
    base = up_rem(std::move(base), m, p);
    while (e) {
        if (e & 1) r = up_rem(up_mul(r, base, p), m, p);
        base = up_rem(up_mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

// x^(p^reps) mod m via repeated Frobenius powering.
inline UPoly up_frobenius_power(const UPoly& m, std::uint64_t p, unsigned reps) {
    UPoly x = {0, 1};
    UPoly r = up_rem(x, m, p);
    for (unsigned i = 0; i < reps; ++i) r = up_powmod(r, p, m, p);
    return r;
}

// Rabin irreducibility test for monic f of degree k >= 1 over F_p, plus an
// explicit root sweep when p is small.
inline bool up_irreducible(const UPoly& f, std::uint64_t p) {
    const int k = up_deg(f);
    if (k <= 0) return false;
    if (k == 1) return true;
    if (p <= 10000) {
        for (std::uint64_t a = 0; a < p; ++a) {
            std::uint64_t v = 0;
            for (int i = k; i >= 0; --i) v = (mulmod(v, a, p) + f[i]) % p;
            if (v == 0) return false;
        }
    }
    // x^(p^k) == x mod f, and gcd(x^(p^(k/t)) - x, f) = 1 for prime t | k.
    UPoly x = {0, 1};
    UPoly xk = up_frobenius_power(f, p, static_cast<unsigned>(k));
    if (up_sub(xk, up_rem(x, f, p), p) != UPoly{}) return false;
    for (int t = 2; t <= k; ++t) {
        if (k % t != 0) continue;
        bool t_prime = true;
        for (int d = 2; d * d <= t; ++d)
            if (t % d == 0) { t_prime = false; break; }
        if (!t_prime) continue;
        UPoly xi = up_frobenius_power(f, p, static_cast<unsigned>(k / t));
        UPoly g = up_gcd(up_sub(xi, up_rem(x, f, p), p), f, p);
        if (up_deg(g) != 0) return false;
    }
    return true;
}

}  // namespace detail

struct FieldRep {
    std::uint64_t p = 0;               // characteristic, prime
    unsigned k = 1;                    // extension degree over F_p
    detail::UPoly minpoly;             // monic of degree k; empty for a plain prime field

    bool same(const FieldRep& o) const { return p == o.p && k == o.k && minpoly == o.minpoly; }
};

class Field;

class FieldElement {
public:
    FieldElement() = default;
    FieldElement(std::shared_ptr<const FieldRep> rep, std::vector<std::uint64_t> coeffs)
        : rep_(std::move(rep)), c_(std::move(coeffs)) {}

    bool is_zero() const {
        for (auto v : c_) if (v != 0) return false;
        return true;
    }
    bool is_one() const {
        if (c_.empty() || c_[0] != 1) return false;
        for (std::size_t i = 1; i < c_.size(); ++i) if (c_[i] != 0) return false;
        return true;
    }

    const std::vector<std::uint64_t>& coeffs() const { return c_; }
    const std::shared_ptr<const FieldRep>& rep() const { return rep_; }

    bool operator==(const FieldElement& o) const {
        return rep_ && o.rep_ && rep_->same(*o.rep_) && c_ == o.c_;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    // Structural ordering, used as a deterministic tiebreak (not algebraic).
    bool operator<(const FieldElement& o) const { return c_ < o.c_; }

private:
    std::shared_ptr<const FieldRep> rep_;
    std::vector<std::uint64_t> c_;  // length k, reduced mod p (and minpoly)
};

class Field {
public:
    Field() = default;

    static Field prime(std::uint64_t p) {
        if (!detail::is_prime_u64(p)) throw Error(Errc::not_prime, std::to_string(p) + " is not prime");
        auto rep = std::make_shared<FieldRep>();
        rep->p = p;
        rep->k = 1;
        return Field(std::move(rep));
    }

    // F_{p^k} with a deterministically found monic irreducible of degree k:
    // seeded random candidates, first success kept.
    static Field extension(std::uint64_t p, unsigned k, std::uint64_t seed) {
        if (!detail::is_prime_u64(p)) throw Error(Errc::not_prime, std::to_string(p) + " is not prime");
        if (k < 1 || k > 12) throw Error(Errc::degree_too_large, "extension degree must be in [1, 12]");
        Rng rng = derive_rng(seed, (static_cast<std::uint64_t>(k) << 32) ^ p);
        for (int attempt = 0; attempt < 100000; ++attempt) {
            detail::UPoly f(k + 1, 0);
            f[k] = 1;
            for (unsigned i = 0; i < k; ++i) f[i] = rng.below(p);
            if (f[0] == 0) f[0] = 1 + rng.below(p - 1);  // avoid the trivial root 0
            if (detail::up_irreducible(f, p)) {
                auto rep = std::make_shared<FieldRep>();
                rep->p = p;
                rep->k = k;
                rep->minpoly = std::move(f);
                return Field(std::move(rep));
            }
        }
        throw Error(Errc::internal, "irreducible search exhausted");
    }

    // Extension with an explicitly supplied monic minimal polynomial.
    static Field extension_with_poly(std::uint64_t p, std::vector<std::uint64_t> minpoly) {
        if (!detail::is_prime_u64(p)) throw Error(Errc::not_prime, std::to_string(p) + " is not prime");
        for (auto& c : minpoly) c %= p;
        detail::up_trim(minpoly);
        int k = detail::up_deg(minpoly);
        if (k < 1 || k > 12) throw Error(Errc::degree_too_large, "minimal polynomial degree must be in [1, 12]");
        if (minpoly.back() != 1) throw Error(Errc::internal, "minimal polynomial must be monic");
        if (!detail::up_irreducible(minpoly, p))
            throw Error(Errc::internal, "supplied minimal polynomial is reducible");
        auto rep = std::make_shared<FieldRep>();
        rep->p = p;
        rep->k = static_cast<unsigned>(k);
        rep->minpoly = std::move(minpoly);
        return Field(std::move(rep));
    }

    std::uint64_t characteristic() const { return rep_->p; }
    unsigned ext_degree() const { return rep_->k; }
    const std::shared_ptr<const FieldRep>& rep() const { return rep_; }
    bool same(const Field& o) const { return rep_ && o.rep_ && rep_->same(*o.rep_); }

    // p^k, or nullopt on overflow.
    std::optional<std::uint64_t> cardinality() const {
        unsigned __int128 c = 1;
        for (unsigned i = 0; i < rep_->k; ++i) {
            c *= rep_->p;
            if (c > static_cast<unsigned __int128>(~std::uint64_t{0})) return std::nullopt;
        }
        return static_cast<std::uint64_t>(c);
    }

    FieldElement zero() const { return FieldElement(rep_, std::vector<std::uint64_t>(rep_->k, 0)); }
    FieldElement one() const { return from_int(1); }

    FieldElement from_int(long long v) const {
        std::uint64_t p = rep_->p;
        long long m = v % static_cast<long long>(p);
        if (m < 0) m += static_cast<long long>(p);
        std::vector<std::uint64_t> c(rep_->k, 0);
        c[0] = static_cast<std::uint64_t>(m);
        return FieldElement(rep_, std::move(c));
    }

    // Element from coefficient vector (entries reduced mod p, padded to k).
    FieldElement element(std::vector<std::uint64_t> coeffs) const {
        if (coeffs.size() > rep_->k) throw Error(Errc::arity_mismatch, "too many coefficients for field element");
        coeffs.resize(rep_->k, 0);
        for (auto& c : coeffs) c %= rep_->p;
        return FieldElement(rep_, std::move(coeffs));
    }

    // Class of x in F_p[x]/(minpoly); the prime field has no generator.
    FieldElement generator() const {
        if (rep_->k < 2) throw Error(Errc::internal, "prime field has no extension generator");
        std::vector<std::uint64_t> c(rep_->k, 0);
        c[1] = 1;
        return FieldElement(rep_, std::move(c));
    }

    FieldElement add(const FieldElement& a, const FieldElement& b) const {
        check(a); check(b);
        std::vector<std::uint64_t> c(rep_->k);
        for (unsigned i = 0; i < rep_->k; ++i) c[i] = (a.coeffs()[i] + b.coeffs()[i]) % rep_->p;
        return FieldElement(rep_, std::move(c));
    }
    FieldElement sub(const FieldElement& a, const FieldElement& b) const {
        check(a); check(b);
        std::vector<std::uint64_t> c(rep_->k);
        for (unsigned i = 0; i < rep_->k; ++i) c[i] = (a.coeffs()[i] + rep_->p - b.coeffs()[i]) % rep_->p;
        return FieldElement(rep_, std::move(c));
    }
    FieldElement neg(const FieldElement& a) const {
        check(a);
        std::vector<std::uint64_t> c(rep_->k);
        for (unsigned i = 0; i < rep_->k; ++i) c[i] = (rep_->p - a.coeffs()[i]) % rep_->p;
        return FieldElement(rep_, std::move(c));
    }
    FieldElement mul(const FieldElement& a, const FieldElement& b) const {
        check(a); check(b);
        if (rep_->k == 1) {
            return FieldElement(rep_, {detail::mulmod(a.coeffs()[0], b.coeffs()[0], rep_->p)});
        }
        detail::UPoly prod = detail::up_mul(a.coeffs(), b.coeffs(), rep_->p);
        prod = detail::up_rem(std::move(prod), rep_->minpoly, rep_->p);
        prod.resize(rep_->k, 0);
        return FieldElement(rep_, std::move(prod));
    }
    FieldElement inv(const FieldElement& a) const {
        check(a);
        if (a.is_zero()) throw Error(Errc::division_by_zero, "inverse of zero");
        if (rep_->k == 1) {
            return FieldElement(rep_, {detail::inv_mod_prime(a.coeffs()[0], rep_->p)});
        }
        detail::UPoly ac = a.coeffs();
        detail::up_trim(ac);
        auto [g, u] = detail::up_half_xgcd(ac, rep_->minpoly, rep_->p);
        // g is a nonzero constant; scale u by its inverse.
        std::uint64_t s = detail::inv_mod_prime(g[0], rep_->p);
        for (auto& x : u) x = detail::mulmod(x, s, rep_->p);
        u = detail::up_rem(std::move(u), rep_->minpoly, rep_->p);
        u.resize(rep_->k, 0);
        return FieldElement(rep_, std::move(u));
    }
    FieldElement div(const FieldElement& a, const FieldElement& b) const { return mul(a, inv(b)); }
    FieldElement pow(const FieldElement& a, std::uint64_t e) const {
        FieldElement r = one(), base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    // All p^k elements exactly once, in base-p counter order.
    std::vector<FieldElement> enumerate() const {
        auto card = cardinality();
        if (!card || *card > 1000000) throw Error(Errc::field_too_large, "enumeration capped at 10^6 elements");
        std::vector<FieldElement> out;
        out.reserve(static_cast<std::size_t>(*card));
        std::vector<std::uint64_t> digits(rep_->k, 0);
        for (std::uint64_t i = 0; i < *card; ++i) {
            out.emplace_back(rep_, digits);
            for (unsigned j = 0; j < rep_->k; ++j) {
                if (++digits[j] < rep_->p) break;
                digits[j] = 0;
            }
        }
        return out;
    }

    FieldElement sample(Rng& rng) const {
        std::vector<std::uint64_t> c(rep_->k);
        for (auto& v : c) v = rng.below(rep_->p);
        return FieldElement(rep_, std::move(c));
    }

    std::string spec_string() const {
        std::string s = std::to_string(rep_->p);
        if (rep_->k > 1) s += "^" + std::to_string(rep_->k);
        return s;
    }

    std::string to_string(const FieldElement& a) const;

    const std::vector<std::uint64_t>& minimal_poly() const { return rep_->minpoly; }

private:
    explicit Field(std::shared_ptr<const FieldRep> rep) : rep_(std::move(rep)) {}

    void check(const FieldElement& a) const {
        if (!a.rep() || !a.rep()->same(*rep_))
            throw Error(Errc::ring_mismatch, "field element belongs to a different field");
    }

    std::shared_ptr<const FieldRep> rep_;
};

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    if (!a.rep() || !b.rep() || !a.rep()->same(*b.rep()))
        throw Error(Errc::ring_mismatch, "field mismatch in +");
    std::vector<std::uint64_t> c(a.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (a.coeffs()[i] + b.coeffs()[i]) % a.rep()->p;
    return FieldElement(a.rep(), std::move(c));
}

inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    if (!a.rep() || !b.rep() || !a.rep()->same(*b.rep()))
        throw Error(Errc::ring_mismatch, "field mismatch in -");
    std::vector<std::uint64_t> c(a.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (a.coeffs()[i] + a.rep()->p - b.coeffs()[i]) % a.rep()->p;
    return FieldElement(a.rep(), std::move(c));
}

inline FieldElement operator-(const FieldElement& a) {
    std::vector<std::uint64_t> c(a.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (a.rep()->p - a.coeffs()[i]) % a.rep()->p;
    return FieldElement(a.rep(), std::move(c));
}

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    if (!a.rep() || !b.rep() || !a.rep()->same(*b.rep()))
        throw Error(Errc::ring_mismatch, "field mismatch in *");
    const auto& rep = *a.rep();
    if (rep.k == 1) return FieldElement(a.rep(), {detail::mulmod(a.coeffs()[0], b.coeffs()[0], rep.p)});
    detail::UPoly prod = detail::up_mul(a.coeffs(), b.coeffs(), rep.p);
    prod = detail::up_rem(std::move(prod), rep.minpoly, rep.p);
    prod.resize(rep.k, 0);
    return FieldElement(a.rep(), std::move(prod));
}

inline FieldElement one_like(const FieldElement& a) {
    std::vector<std::uint64_t> c(a.coeffs().size(), 0);
    c[0] = 1;
    return FieldElement(a.rep(), std::move(c));
}

// Canonical string form: a residue for prime fields, a polynomial in the
// extension generator g otherwise.
inline std::string element_to_string(const FieldElement& a) {
    const FieldRep& rep = *a.rep();
    if (rep.k == 1) return std::to_string(a.coeffs()[0]);
    std::string s;
    for (int i = static_cast<int>(rep.k) - 1; i >= 0; --i) {
        std::uint64_t c = a.coeffs()[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0) {
            s += std::to_string(c);
        } else {
            if (c != 1) s += std::to_string(c) + "*";
            s += "g";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

inline std::string Field::to_string(const FieldElement& a) const {
    check(a);
    return element_to_string(a);
}

// Embedding F_{p^m} -> F_{p^{mk}} determined by a root of the source minimal
// polynomial in the target; found by exhaustive search.
class FieldEmbedding {
public:
    FieldEmbedding(Field src, Field dst) : src_(std::move(src)), dst_(std::move(dst)) {
        if (src_.characteristic() != dst_.characteristic())
            throw Error(Errc::ring_mismatch, "embedding requires equal characteristic");
        if (dst_.ext_degree() % src_.ext_degree() != 0)
            throw Error(Errc::ring_mismatch, "no embedding: source degree does not divide target degree");
        if (src_.ext_degree() == 1) {
            gen_image_ = dst_.one();
            return;
        }
        const auto& mp = src_.minimal_poly();
        for (const FieldElement& cand : dst_.enumerate()) {
            FieldElement v = dst_.zero();
            for (int i = static_cast<int>(mp.size()) - 1; i >= 0; --i) {
                v = dst_.add(dst_.mul(v, cand), dst_.from_int(static_cast<long long>(mp[i])));
            }
            if (v.is_zero()) {
                gen_image_ = cand;
                return;
            }
        }
        throw Error(Errc::internal, "no root of minimal polynomial in target field");
    }

    const Field& source() const { return src_; }
    const Field& target() const { return dst_; }

    FieldElement operator()(const FieldElement& a) const {
        if (!a.rep()->same(*src_.rep())) throw Error(Errc::ring_mismatch, "embedding applied to foreign element");
        if (src_.ext_degree() == 1) return dst_.from_int(static_cast<long long>(a.coeffs()[0]));
        FieldElement acc = dst_.zero();
        FieldElement power = dst_.one();
        for (unsigned i = 0; i < src_.ext_degree(); ++i) {
            acc = dst_.add(acc, dst_.mul(dst_.from_int(static_cast<long long>(a.coeffs()[i])), power));
            power = dst_.mul(power, gen_image_);
        }
        return acc;
    }

private:
    Field src_, dst_;
    FieldElement gen_image_;
};

}  // namespace ratdeg
