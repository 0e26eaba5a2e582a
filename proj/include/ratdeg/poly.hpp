// Sparse multivariate polynomials over a finite field, with monomial orders
// and homogeneity utilities. Polynomials are immutable values in canonical
// sparse form: no zero coefficients stored, monomial arity fixed by the ring.
#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ratdeg/error.hpp"
#include "ratdeg/field.hpp"

namespace ratdeg {

struct Monomial {
    std::vector<unsigned> e;

    explicit Monomial(std::size_t nvars = 0) : e(nvars, 0) {}
    explicit Monomial(std::vector<unsigned> exps) : e(std::move(exps)) {}

    unsigned total_degree() const { return std::accumulate(e.begin(), e.end(), 0u); }
    std::size_t nvars() const { return e.size(); }

    bool divides(const Monomial& o) const {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r(*this);
        for (std::size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
        return r;
    }

    // Exact quotient; caller guarantees divisibility.
    Monomial quotient(const Monomial& o) const {
        Monomial r(*this);
        for (std::size_t i = 0; i < e.size(); ++i) r.e[i] -= o.e[i];
        return r;
    }

    static Monomial lcm(const Monomial& a, const Monomial& b) {
        Monomial r(a);
        for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = std::max(a.e[i], b.e[i]);
        return r;
    }

    bool is_one() const {
        for (auto x : e)
            if (x) return false;
        return true;
    }

    bool coprime(const Monomial& o) const {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] && o.e[i]) return false;
        return true;
    }

    bool operator==(const Monomial& o) const { return e == o.e; }
    bool operator!=(const Monomial& o) const { return e != o.e; }

    // Structural order for canonical term maps (not a monomial order).
    struct StructLess {
        bool operator()(const Monomial& a, const Monomial& b) const { return a.e < b.e; }
    };
};

struct MonomialOrder {
    enum class Kind { lex, grevlex, block };
    Kind kind = Kind::grevlex;
    unsigned elim = 0;  // block: number of leading variables to eliminate

    static MonomialOrder Lex() { return {Kind::lex, 0}; }
    static MonomialOrder Grevlex() { return {Kind::grevlex, 0}; }
    static MonomialOrder Block(unsigned elim_count) { return {Kind::block, elim_count}; }

    // -1 / 0 / +1 for a < b / a == b / a > b.
    int compare(const Monomial& a, const Monomial& b) const {
        switch (kind) {
            case Kind::lex: return cmp_lex(a.e, b.e, 0, a.e.size());
            case Kind::grevlex: return cmp_grevlex(a.e, b.e, 0, a.e.size());
            case Kind::block: {
                int c = cmp_grevlex(a.e, b.e, 0, elim);
                if (c != 0) return c;
                return cmp_grevlex(a.e, b.e, elim, a.e.size());
            }
        }
        return 0;
    }

    bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }
    bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }

private:
    static int cmp_lex(const std::vector<unsigned>& a, const std::vector<unsigned>& b,
                       std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
        }
        return 0;
    }
    static int cmp_grevlex(const std::vector<unsigned>& a, const std::vector<unsigned>& b,
                           std::size_t lo, std::size_t hi) {
        long da = 0, db = 0;
        for (std::size_t i = lo; i < hi; ++i) { da += a[i]; db += b[i]; }
        if (da != db) return da > db ? 1 : -1;
        for (std::size_t i = hi; i-- > lo;) {
            if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;  // smaller trailing exponent wins
        }
        return 0;
    }
};

struct PolyRing {
    Field field;
    std::vector<std::string> vars;

    bool same(const PolyRing& o) const { return field.same(o.field) && vars == o.vars; }
    std::size_t nvars() const { return vars.size(); }
};

using RingPtr = std::shared_ptr<const PolyRing>;

inline RingPtr make_ring(Field field, std::vector<std::string> vars) {
    auto r = std::make_shared<PolyRing>();
    r->field = std::move(field);
    r->vars = std::move(vars);
    return r;
}

class Poly {
public:
    using TermMap = std::map<Monomial, FieldElement, Monomial::StructLess>;

    Poly() = default;
    explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}

    static Poly zero(RingPtr ring) { return Poly(std::move(ring)); }

    static Poly constant(const RingPtr& ring, const FieldElement& c) {
        Poly p(ring);
        if (!c.is_zero()) p.terms_.emplace(Monomial(ring->nvars()), c);
        return p;
    }

    static Poly constant(const RingPtr& ring, long long c) {
        return constant(ring, ring->field.from_int(c));
    }

    static Poly variable(const RingPtr& ring, std::size_t i) {
        if (i >= ring->nvars()) throw Error(Errc::arity_mismatch, "variable index out of range");
        Monomial m(ring->nvars());
        m.e[i] = 1;
        Poly p(ring);
        p.terms_.emplace(std::move(m), ring->field.one());
        return p;
    }

    static Poly term(const RingPtr& ring, Monomial m, const FieldElement& c) {
        if (m.nvars() != ring->nvars()) throw Error(Errc::arity_mismatch, "monomial arity mismatch");
        Poly p(ring);
        if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
        return p;
    }

    const RingPtr& ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t num_terms() const { return terms_.size(); }

    // Max total degree; -1 for the zero polynomial.
    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.total_degree()));
        return d;
    }

    Poly operator+(const Poly& o) const {
        check_ring(o);
        Poly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    Poly operator-(const Poly& o) const {
        check_ring(o);
        Poly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
        return r;
    }
    Poly operator-() const {
        Poly r(ring_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    Poly operator*(const Poly& o) const {
        check_ring(o);
        Poly r(ring_);
        for (const auto& [ma, ca] : terms_) {
            for (const auto& [mb, cb] : o.terms_) {
                r.add_term(ma * mb, ca * cb);
            }
        }
        return r;
    }

    Poly scaled(const FieldElement& c) const {
        Poly r(ring_);
        if (c.is_zero()) return r;
        for (const auto& [m, coef] : terms_) {
            FieldElement v = coef * c;
            if (!v.is_zero()) r.terms_.emplace(m, v);
        }
        return r;
    }

    Poly shifted(const Monomial& m) const {  // multiply by a monomial
        Poly r(ring_);
        for (const auto& [mm, c] : terms_) r.terms_.emplace(mm * m, c);
        return r;
    }

    Poly pow(unsigned e) const {
        Poly r = constant(ring_, 1);
        Poly base = *this;
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    bool operator==(const Poly& o) const { return ring_->same(*o.ring_) && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    struct Homogeneity {
        bool is_zero_poly = false;
        bool homogeneous = false;
        int degree = -1;  // valid iff homogeneous and not zero
    };

    // Zero polynomial is flagged specially (homogeneous of every degree).
    Homogeneity homogeneity() const {
        Homogeneity h;
        if (terms_.empty()) {
            h.is_zero_poly = true;
            h.homogeneous = true;
            return h;
        }
        int d = static_cast<int>(terms_.begin()->first.total_degree());
        for (const auto& [m, c] : terms_) {
            if (static_cast<int>(m.total_degree()) != d) return h;  // homogeneous = false
        }
        h.homogeneous = true;
        h.degree = d;
        return h;
    }

    FieldElement evaluate(const std::vector<FieldElement>& point) const {
        if (point.size() != ring_->nvars())
            throw Error(Errc::arity_mismatch, "evaluation point has wrong arity");
        const Field& f = ring_->field;
        FieldElement acc = f.zero();
        for (const auto& [m, c] : terms_) {
            FieldElement t = c;
            for (std::size_t i = 0; i < m.e.size(); ++i) {
                if (m.e[i]) t = t * f.pow(point[i], m.e[i]);
            }
            acc = f.add(acc, t);
        }
        return acc;
    }

    // Set X_i = 1 and drop the variable; requires a homogeneous input.
    Poly dehomogenize(std::size_t i) const {
        auto h = homogeneity();
        if (!h.homogeneous) throw Error(Errc::not_homogeneous, "dehomogenize needs a homogeneous polynomial");
        std::vector<std::string> vars;
        for (std::size_t j = 0; j < ring_->nvars(); ++j)
            if (j != i) vars.push_back(ring_->vars[j]);
        RingPtr small = make_ring(ring_->field, std::move(vars));
        Poly r(small);
        for (const auto& [m, c] : terms_) {
            Monomial mm(small->nvars());
            std::size_t k = 0;
            for (std::size_t j = 0; j < m.e.size(); ++j)
                if (j != i) mm.e[k++] = m.e[j];
            r.add_term(mm, c);
        }
        return r;
    }

    // Insert a homogenizing variable at index i, padding every term to degree d.
    Poly homogenize(std::size_t i, unsigned d, const RingPtr& big_ring) const {
        Poly r(big_ring);
        for (const auto& [m, c] : terms_) {
            unsigned td = m.total_degree();
            if (td > d) throw Error(Errc::arity_mismatch, "homogenization degree too small");
            Monomial mm(big_ring->nvars());
            std::size_t k = 0;
            for (std::size_t j = 0; j < big_ring->nvars(); ++j) {
                if (j == i) mm.e[j] = d - td;
                else mm.e[j] = m.e[k++];
            }
            r.add_term(mm, c);
        }
        return r;
    }

    // Substitute a constant for variable i (ring keeps its arity).
    Poly substitute(std::size_t i, const FieldElement& value) const {
        const Field& f = ring_->field;
        Poly r(ring_);
        for (const auto& [m, c] : terms_) {
            FieldElement coef = c;
            if (m.e[i]) coef = coef * f.pow(value, m.e[i]);
            Monomial mm = m;
            mm.e[i] = 0;
            r.add_term(mm, coef);
        }
        return r;
    }

    // Variable permutation: new variable j is old variable perm[j].
    Poly permute_vars(const std::vector<std::size_t>& perm, const RingPtr& new_ring) const {
        Poly r(new_ring);
        for (const auto& [m, c] : terms_) {
            Monomial mm(new_ring->nvars());
            for (std::size_t j = 0; j < perm.size(); ++j) mm.e[j] = m.e[perm[j]];
            r.add_term(mm, c);
        }
        return r;
    }

    std::pair<Monomial, FieldElement> leading_term(const MonomialOrder& ord) const {
        if (terms_.empty()) throw Error(Errc::internal, "leading term of zero polynomial");
        auto best = terms_.begin();
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
            if (ord.greater(it->first, best->first)) best = it;
        }
        return {best->first, best->second};
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        const Field& f = ring_->field;
        std::string s;
        // descending structural order for stable output
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c] = *it;
            std::vector<std::string> factors;
            std::string cs = f.to_string(c);
            if (m.is_one() || cs != "1") {
                if (cs.find('+') != std::string::npos) cs = "(" + cs + ")";
                factors.push_back(cs);
            }
            for (std::size_t i = 0; i < m.e.size(); ++i) {
                if (!m.e[i]) continue;
                std::string v = ring_->vars[i];
                if (m.e[i] > 1) v += "^" + std::to_string(m.e[i]);
                factors.push_back(v);
            }
            std::string term;
            for (std::size_t i = 0; i < factors.size(); ++i) {
                if (i) term += "*";
                term += factors[i];
            }
            if (!s.empty()) s += " + ";
            s += term;
        }
        return s;
    }

    void add_term(const Monomial& m, const FieldElement& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            FieldElement v = it->second + c;
            if (v.is_zero()) terms_.erase(it);
            else it->second = v;
        }
    }

private:
    void check_ring(const Poly& o) const {
        if (!ring_ || !o.ring_ || !ring_->same(*o.ring_))
            throw Error(Errc::ring_mismatch, "polynomials from different rings");
    }

    RingPtr ring_;
    TermMap terms_;
};

// Ring-level convenience: a monic linear polynomial x_i - c.
inline Poly linear_root_factor(const RingPtr& ring, std::size_t i, const FieldElement& c) {
    return Poly::variable(ring, i) - Poly::constant(ring, c);
}

}  // namespace ratdeg
