// Groebner bases (Buchberger with the product and chain criteria) and the
// ideal operations built on them: normal forms, elimination, saturation,
// Hilbert function, Krull dimension, vector-space dimension of Artinian
// quotients. A single computation is one sequential unit of work; all inputs
// and outputs are immutable values.
#pragma once

#include <algorithm>
#include <atomic>
#include <optional>
#include <set>
#include <vector>

#include "ratdeg/error.hpp"
#include "ratdeg/poly.hpp"

namespace ratdeg {

struct Ideal {
    RingPtr ring;
    std::vector<Poly> gens;  // no zero generators
};

inline Ideal make_ideal(RingPtr ring, std::vector<Poly> gens) {
    Ideal I;
    I.ring = std::move(ring);
    for (auto& g : gens) {
        if (g.is_zero()) continue;
        if (!g.ring()->same(*I.ring)) throw Error(Errc::ring_mismatch, "ideal generators from different rings");
        I.gens.push_back(std::move(g));
    }
    return I;
}

struct GroebnerBasis {
    RingPtr ring;
    MonomialOrder order;
    std::vector<Poly> elems;  // reduced basis, monic, sorted by ascending leading monomial
};

// Library-wide S-pair budget; the shell may override it once at startup.
inline long long& groebner_budget() {
    static long long budget = 100000;
    return budget;
}

// Deterministic work counters surfaced in reports.
inline std::atomic<std::uint64_t>& groebner_call_counter() {
    static std::atomic<std::uint64_t> c{0};
    return c;
}
inline std::atomic<std::uint64_t>& spair_counter() {
    static std::atomic<std::uint64_t> c{0};
    return c;
}

namespace gbdetail {

inline Poly make_monic(const Poly& f, const MonomialOrder& ord) {
    auto [lm, lc] = f.leading_term(ord);
    if (lc.is_one()) return f;
    return f.scaled(f.ring()->field.inv(lc));
}

// Full normal form of f against (monic) divisors with cached leading monomials.
inline Poly reduce_full(const Poly& f, const std::vector<Poly>& basis,
                        const std::vector<Monomial>& lms, const MonomialOrder& ord) {
    Poly rem(f.ring());
    Poly work = f;
    while (!work.is_zero()) {
        auto [lm, lc] = work.leading_term(ord);
        bool reduced = false;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (lms[i].divides(lm)) {
                work = work - basis[i].shifted(lm.quotient(lms[i])).scaled(lc);
                reduced = true;
                break;
            }
        }
        if (!reduced) {
            rem.add_term(lm, lc);
            work.add_term(lm, -lc);
        }
    }
    return rem;
}

}  // namespace gbdetail

inline GroebnerBasis groebner(const Ideal& I, MonomialOrder order) {
    groebner_call_counter().fetch_add(1, std::memory_order_relaxed);
    const RingPtr& ring = I.ring;
    std::vector<Poly> basis;
    std::vector<Monomial> lms;
    auto push = [&](const Poly& f) {
        Poly m = gbdetail::make_monic(f, order);
        lms.push_back(m.leading_term(order).first);
        basis.push_back(std::move(m));
    };
    for (const auto& g : I.gens) {
        Poly r = gbdetail::reduce_full(g, basis, lms, order);
        if (!r.is_zero()) push(r);
    }

    struct Pair {
        std::size_t i, j;
        Monomial lcm;
        unsigned deg;
    };
    std::vector<Pair> pending;
    std::set<std::pair<std::size_t, std::size_t>> handled;
    auto add_pairs_for = [&](std::size_t jnew) {
        for (std::size_t i = 0; i < jnew; ++i) {
            Monomial l = Monomial::lcm(lms[i], lms[jnew]);
            pending.push_back({i, jnew, l, l.total_degree()});
        }
    };
    for (std::size_t j = 0; j < basis.size(); ++j) add_pairs_for(j);

    const long long budget = groebner_budget();
    long long processed = 0;
    while (!pending.empty()) {
        // normal selection: smallest lcm degree, then smallest lcm in the order
        std::size_t best = 0;
        for (std::size_t k = 1; k < pending.size(); ++k) {
            if (pending[k].deg < pending[best].deg ||
                (pending[k].deg == pending[best].deg && order.less(pending[k].lcm, pending[best].lcm)))
                best = k;
        }
        Pair pr = pending[best];
        pending[best] = pending.back();
        pending.pop_back();
        handled.insert({pr.i, pr.j});

        if (++processed > budget)
            throw Error(Errc::budget_exceeded, "S-pair budget of " + std::to_string(budget) + " exceeded");
        spair_counter().fetch_add(1, std::memory_order_relaxed);

        // product criterion
        if (lms[pr.i].coprime(lms[pr.j])) continue;
        // chain criterion
        bool skip = false;
        for (std::size_t k = 0; k < basis.size() && !skip; ++k) {
            if (k == pr.i || k == pr.j) continue;
            if (!lms[k].divides(pr.lcm)) continue;
            auto key_ik = std::minmax(pr.i, k);
            auto key_jk = std::minmax(pr.j, k);
            if (handled.count({key_ik.first, key_ik.second}) && handled.count({key_jk.first, key_jk.second}))
                skip = true;
        }
        if (skip) continue;

        Poly s = basis[pr.i].shifted(pr.lcm.quotient(lms[pr.i])) -
                 basis[pr.j].shifted(pr.lcm.quotient(lms[pr.j]));
        Poly r = gbdetail::reduce_full(s, basis, lms, order);
        if (!r.is_zero()) {
            push(r);
            add_pairs_for(basis.size() - 1);
        }
    }

    // Minimalize: drop elements whose leading monomial is divisible by another's.
    std::vector<bool> keep(basis.size(), true);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size() && keep[i]; ++j) {
            if (i == j || !keep[j]) continue;
            if (lms[j].divides(lms[i]) && !(lms[i] == lms[j] && j > i)) keep[i] = false;
        }
    }
    std::vector<Poly> minimal;
    std::vector<Monomial> min_lms;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (keep[i]) {
            minimal.push_back(basis[i]);
            min_lms.push_back(lms[i]);
        }
    }
    // Reduce tails against the other elements to get the unique reduced basis.
    std::vector<Poly> reduced(minimal.size(), Poly(ring));
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Poly> others;
        std::vector<Monomial> others_lms;
        for (std::size_t j = 0; j < minimal.size(); ++j) {
            if (j == i) continue;
            others.push_back(minimal[j]);
            others_lms.push_back(min_lms[j]);
        }
        reduced[i] = gbdetail::reduce_full(minimal[i], others, others_lms, order);
    }
    std::sort(reduced.begin(), reduced.end(), [&](const Poly& a, const Poly& b) {
        return order.less(a.leading_term(order).first, b.leading_term(order).first);
    });

    GroebnerBasis gb;
    gb.ring = ring;
    gb.order = order;
    gb.elems = std::move(reduced);
    return gb;
}

inline Poly normal_form(const Poly& f, const GroebnerBasis& G) {
    if (!f.ring()->same(*G.ring)) throw Error(Errc::ring_mismatch, "normal form in a different ring");
    std::vector<Monomial> lms;
    lms.reserve(G.elems.size());
    for (const auto& g : G.elems) lms.push_back(g.leading_term(G.order).first);
    return gbdetail::reduce_full(f, G.elems, lms, G.order);
}

inline bool ideal_contains(const GroebnerBasis& G, const Poly& f) {
    return normal_form(f, G).is_zero();
}

inline bool ideal_equal(const Ideal& I, const Ideal& J) {
    GroebnerBasis gi = groebner(I, MonomialOrder::Grevlex());
    GroebnerBasis gj = groebner(J, MonomialOrder::Grevlex());
    for (const auto& f : J.gens)
        if (!ideal_contains(gi, f)) return false;
    for (const auto& f : I.gens)
        if (!ideal_contains(gj, f)) return false;
    return true;
}

namespace gbdetail {

// Lift into a ring with one auxiliary variable prepended.
inline Poly prepend_var(const Poly& f, const RingPtr& big) {
    Poly r(big);
    for (const auto& [m, c] : f.terms()) {
        Monomial mm(big->nvars());
        for (std::size_t i = 0; i < m.e.size(); ++i) mm.e[i + 1] = m.e[i];
        r.add_term(mm, c);
    }
    return r;
}

inline Poly drop_first_var(const Poly& f, const RingPtr& small) {
    Poly r(small);
    for (const auto& [m, c] : f.terms()) {
        Monomial mm(small->nvars());
        for (std::size_t i = 1; i < m.e.size(); ++i) mm.e[i - 1] = m.e[i];
        r.add_term(mm, c);
    }
    return r;
}

inline bool uses_first_var(const Poly& f) {
    for (const auto& [m, c] : f.terms())
        if (m.e[0]) return true;
    return false;
}

inline RingPtr ring_with_tag(const RingPtr& ring) {
    std::vector<std::string> vars;
    vars.push_back("@t");  // cannot collide with parsed identifiers
    for (const auto& v : ring->vars) vars.push_back(v);
    return make_ring(ring->field, std::move(vars));
}

}  // namespace gbdetail

// I : g^infinity via elimination of t from I + (1 - t*g).
inline Ideal saturate(const Ideal& I, const Poly& g) {
    if (g.is_zero()) throw Error(Errc::division_by_zero, "saturation by the zero polynomial");
    if (!g.ring()->same(*I.ring)) throw Error(Errc::ring_mismatch, "saturation polynomial in a different ring");
    RingPtr big = gbdetail::ring_with_tag(I.ring);
    std::vector<Poly> gens;
    for (const auto& f : I.gens) gens.push_back(gbdetail::prepend_var(f, big));
    Poly t = Poly::variable(big, 0);
    gens.push_back(Poly::constant(big, 1) - t * gbdetail::prepend_var(g, big));
    GroebnerBasis gb = groebner(make_ideal(big, std::move(gens)), MonomialOrder::Block(1));
    std::vector<Poly> kept;
    for (const auto& e : gb.elems)
        if (!gbdetail::uses_first_var(e)) kept.push_back(gbdetail::drop_first_var(e, I.ring));
    return make_ideal(I.ring, std::move(kept));
}

// I ∩ J via the t, (1-t) module trick with elimination.
inline Ideal intersect(const Ideal& I, const Ideal& J) {
    if (!I.ring->same(*J.ring)) throw Error(Errc::ring_mismatch, "intersection of ideals in different rings");
    RingPtr big = gbdetail::ring_with_tag(I.ring);
    Poly t = Poly::variable(big, 0);
    Poly one_minus_t = Poly::constant(big, 1) - t;
    std::vector<Poly> gens;
    for (const auto& f : I.gens) gens.push_back(t * gbdetail::prepend_var(f, big));
    for (const auto& f : J.gens) gens.push_back(one_minus_t * gbdetail::prepend_var(f, big));
    GroebnerBasis gb = groebner(make_ideal(big, std::move(gens)), MonomialOrder::Block(1));
    std::vector<Poly> kept;
    for (const auto& e : gb.elems)
        if (!gbdetail::uses_first_var(e)) kept.push_back(gbdetail::drop_first_var(e, I.ring));
    return make_ideal(I.ring, std::move(kept));
}

// Saturation by the irrelevant ideal (X_0, ..., X_n), computed as the
// intersection of the single-variable saturations.
inline Ideal saturate_irrelevant(const Ideal& I) {
    for (const auto& g : I.gens) {
        if (!g.homogeneity().homogeneous)
            throw Error(Errc::not_homogeneous, "irrelevant saturation needs homogeneous generators");
    }
    std::optional<Ideal> acc;
    for (std::size_t i = 0; i < I.ring->nvars(); ++i) {
        Ideal sat_i = saturate(I, Poly::variable(I.ring, i));
        if (!acc) acc = std::move(sat_i);
        else acc = intersect(*acc, sat_i);
    }
    return *acc;
}

inline int krull_dim(const Ideal& I) {
    GroebnerBasis gb = groebner(I, MonomialOrder::Grevlex());
    const std::size_t n = I.ring->nvars();
    std::vector<Monomial> lts;
    for (const auto& g : gb.elems) {
        Monomial lm = g.leading_term(gb.order).first;
        if (lm.is_one()) return -1;  // unit ideal
        lts.push_back(std::move(lm));
    }
    // dim = size of the largest variable subset S with no leading monomial
    // supported inside S.
    for (std::size_t size = n + 1; size-- > 0;) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcountll(mask)) != size) continue;
            bool independent = true;
            for (const auto& m : lts) {
                bool inside = true;
                for (std::size_t v = 0; v < n && inside; ++v)
                    if (m.e[v] > 0 && !(mask & (std::uint64_t{1} << v))) inside = false;
                if (inside) { independent = false; break; }
            }
            if (independent) return static_cast<int>(size);
        }
    }
    return -1;
}

namespace gbdetail {

inline void enumerate_monomials_of_degree(std::size_t nvars, unsigned d,
                                          Monomial& scratch, std::size_t var,
                                          const std::vector<Monomial>& lts, std::size_t& count) {
    if (var + 1 == nvars) {
        scratch.e[var] = d;
        bool standard = true;
        for (const auto& lt : lts)
            if (lt.divides(scratch)) { standard = false; break; }
        if (standard) ++count;
        scratch.e[var] = 0;
        return;
    }
    for (unsigned e = 0; e <= d; ++e) {
        scratch.e[var] = e;
        enumerate_monomials_of_degree(nvars, d - e, scratch, var + 1, lts, count);
    }
    scratch.e[var] = 0;
}

inline std::size_t standard_monomials_of_degree(std::size_t nvars, unsigned d,
                                                const std::vector<Monomial>& lts) {
    Monomial scratch(nvars);
    std::size_t count = 0;
    if (nvars == 0) return d == 0 ? 1 : 0;
    enumerate_monomials_of_degree(nvars, d, scratch, 0, lts, count);
    return count;
}

}  // namespace gbdetail

// Length of a zero-dimensional projective scheme: the stabilized Hilbert
// function of the (saturated, homogeneous) ideal. Stabilization means three
// consecutive equal values; a hard degree cap of nvars * d_max converts
// silent nontermination into a typed error.
inline long long hilbert_length(const Ideal& I) {
    int dim = krull_dim(I);
    if (dim > 1) throw Error(Errc::positive_dimensional, "Hilbert length needs projective dimension <= 0");
    GroebnerBasis gb = groebner(I, MonomialOrder::Grevlex());
    std::vector<Monomial> lts;
    for (const auto& g : gb.elems) lts.push_back(g.leading_term(gb.order).first);
    int d_max = 1;
    for (const auto& g : I.gens) d_max = std::max(d_max, g.degree());
    const unsigned cap = static_cast<unsigned>(I.ring->nvars()) * static_cast<unsigned>(d_max) + 2;
    std::vector<std::size_t> h;
    for (unsigned d = 0; d <= cap; ++d) {
        h.push_back(gbdetail::standard_monomials_of_degree(I.ring->nvars(), d, lts));
        if (h.size() >= 3) {
            std::size_t k = h.size();
            if (h[k - 1] == h[k - 2] && h[k - 2] == h[k - 3])
                return static_cast<long long>(h[k - 1]);
        }
    }
    throw Error(Errc::positive_dimensional, "Hilbert function did not stabilize below the degree cap");
}

// Standard monomial basis of an Artinian affine quotient.
inline std::vector<Monomial> standard_monomial_basis(const GroebnerBasis& gb) {
    const std::size_t n = gb.ring->nvars();
    std::vector<Monomial> lts;
    for (const auto& g : gb.elems) lts.push_back(g.leading_term(gb.order).first);
    for (const auto& lt : lts)
        if (lt.is_one()) return {};  // unit ideal: zero ring
    // zero-dimensionality: every variable must appear as a pure power among
    // the leading terms
    std::vector<unsigned> bound(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        bool found = false;
        for (const auto& lt : lts) {
            bool pure = lt.e[v] > 0;
            for (std::size_t w = 0; w < n && pure; ++w)
                if (w != v && lt.e[w] > 0) pure = false;
            if (pure) {
                bound[v] = found ? std::min(bound[v], lt.e[v]) : lt.e[v];
                found = true;
            }
        }
        if (!found) throw Error(Errc::not_zero_dimensional, "quotient is not finite-dimensional");
    }
    std::vector<Monomial> basis;
    // enumerate the box below the pure-power bounds, keep standard monomials
    std::vector<unsigned> idx(n, 0);
    for (;;) {
        Monomial m(n);
        m.e = idx;
        bool standard = true;
        for (const auto& lt : lts)
            if (lt.divides(m)) { standard = false; break; }
        if (standard) basis.push_back(m);
        std::size_t v = 0;
        while (v < n) {
            if (++idx[v] < bound[v]) break;
            idx[v] = 0;
            ++v;
        }
        if (v == n) break;
    }
    std::sort(basis.begin(), basis.end(), [](const Monomial& a, const Monomial& b) {
        return Monomial::StructLess{}(a, b);
    });
    return basis;
}

// Number of standard monomials of an Artinian affine quotient, for any order.
inline long long vs_dimension(const Ideal& I) {
    GroebnerBasis gb = groebner(I, MonomialOrder::Grevlex());
    if (gb.elems.empty()) throw Error(Errc::not_zero_dimensional, "zero ideal has infinite quotient");
    return static_cast<long long>(standard_monomial_basis(gb).size());
}

}  // namespace ratdeg
