// Local analysis of Artinian affine quotients: rational points through
// per-coordinate eliminants, local multiplicities as joint generalized
// eigenspaces of the commuting multiplication matrices, Nakayama minimal
// generator counts in truncated local rings, and socle dimensions.
#pragma once

#include <numeric>
#include <optional>
#include <vector>

#include "ratdeg/error.hpp"
#include "ratdeg/ideal.hpp"
#include "ratdeg/linalg.hpp"
#include "ratdeg/univar.hpp"

namespace ratdeg {

struct QuotientAlgebra {
    RingPtr ring;
    GroebnerBasis gb;
    std::vector<Monomial> basis;  // standard monomials
    std::vector<Mat> mul_mats;    // one per variable, pairwise commuting

    std::size_t dim() const { return basis.size(); }
};

namespace zddetail {

inline std::vector<FieldElement> coords_of(const Poly& f, const std::vector<Monomial>& basis,
                                           const Field& field) {
    std::vector<FieldElement> v(basis.size(), field.zero());
    for (const auto& [m, c] : f.terms()) {
        bool placed = false;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis[i] == m) {
                v[i] = c;
                placed = true;
                break;
            }
        }
        if (!placed) throw Error(Errc::internal, "normal form left a non-standard monomial");
    }
    return v;
}

}  // namespace zddetail

inline QuotientAlgebra quotient_algebra(const Ideal& I) {
    if (krull_dim(I) > 0) throw Error(Errc::not_zero_dimensional, "quotient algebra needs a finite quotient");
    QuotientAlgebra A;
    A.ring = I.ring;
    A.gb = groebner(I, MonomialOrder::Grevlex());
    A.basis = standard_monomial_basis(A.gb);
    const Field& F = I.ring->field;
    const std::size_t n = I.ring->nvars();
    const std::size_t N = A.basis.size();
    for (std::size_t v = 0; v < n; ++v) {
        Mat M(F, N, N);
        for (std::size_t j = 0; j < N; ++j) {
            Monomial xm = A.basis[j];
            xm.e[v] += 1;
            Poly img = normal_form(Poly::term(A.ring, xm, F.one()), A.gb);
            auto col = zddetail::coords_of(img, A.basis, F);
            for (std::size_t i = 0; i < N; ++i) M.at(i, j) = col[i];
        }
        A.mul_mats.push_back(std::move(M));
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (!(A.mul_mats[a] * A.mul_mats[b] == A.mul_mats[b] * A.mul_mats[a]))
                throw Error(Errc::internal, "multiplication matrices do not commute");
    return A;
}

// Scalar extension of an algebra (same basis, embedded matrices and basis polynomials).
inline QuotientAlgebra extend_scalars(const QuotientAlgebra& A, const FieldEmbedding& emb) {
    QuotientAlgebra B;
    B.ring = make_ring(emb.target(), A.ring->vars);
    B.basis = A.basis;
    B.gb.ring = B.ring;
    B.gb.order = A.gb.order;
    for (const auto& g : A.gb.elems) {
        Poly h(B.ring);
        for (const auto& [m, c] : g.terms()) h.add_term(m, emb(c));
        B.gb.elems.push_back(std::move(h));
    }
    for (const auto& M : A.mul_mats) {
        Mat E(emb.target(), M.rows(), M.cols());
        for (std::size_t i = 0; i < M.rows(); ++i)
            for (std::size_t j = 0; j < M.cols(); ++j) E.at(i, j) = emb(M.at(i, j));
        B.mul_mats.push_back(std::move(E));
    }
    return B;
}

inline Poly embed_poly(const Poly& f, const FieldEmbedding& emb, const RingPtr& target_ring) {
    Poly r(target_ring);
    for (const auto& [m, c] : f.terms()) r.add_term(m, emb(c));
    return r;
}

namespace zddetail {

inline void require_point(const QuotientAlgebra& A, const std::vector<FieldElement>& P) {
    if (P.size() != A.ring->nvars()) throw Error(Errc::arity_mismatch, "point arity mismatch");
    for (const auto& g : A.gb.elems)
        if (!g.evaluate(P).is_zero())
            throw Error(Errc::not_a_point, "a generator does not vanish at the point");
}

// Basis (as columns) of the joint generalized eigenspace at P.
inline Mat generalized_eigenspace(const QuotientAlgebra& A, const std::vector<FieldElement>& P) {
    const Field& F = A.ring->field;
    const std::size_t N = A.dim();
    std::vector<Mat> stacked;
    for (std::size_t v = 0; v < A.mul_mats.size(); ++v) {
        Mat shifted = A.mul_mats[v];
        for (std::size_t i = 0; i < N; ++i) shifted.at(i, i) = F.sub(shifted.at(i, i), P[v]);
        stacked.push_back(shifted.pow(static_cast<std::uint64_t>(N)));
    }
    Mat joint = Mat::vstack(stacked);
    auto basis = joint.kernel_basis();
    Mat W(F, N, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < N; ++i) W.at(i, j) = basis[j][i];
    return W;
}

}  // namespace zddetail

// Local length at P: dimension of the joint generalized eigenspace.
inline int local_multiplicity(const QuotientAlgebra& A, const std::vector<FieldElement>& P) {
    zddetail::require_point(A, P);
    return static_cast<int>(zddetail::generalized_eigenspace(A, P).cols());
}

// Socle dimension of the local factor at P: vectors of the generalized
// eigenspace killed by every (M_i - P_i).
inline int socle_dimension(const QuotientAlgebra& A, const std::vector<FieldElement>& P) {
    zddetail::require_point(A, P);
    const Field& F = A.ring->field;
    Mat W = zddetail::generalized_eigenspace(A, P);
    std::vector<Mat> stacked;
    for (std::size_t v = 0; v < A.mul_mats.size(); ++v) {
        Mat shifted = A.mul_mats[v];
        for (std::size_t i = 0; i < shifted.rows(); ++i) shifted.at(i, i) = F.sub(shifted.at(i, i), P[v]);
        stacked.push_back(shifted * W);
    }
    return static_cast<int>(Mat::vstack(stacked).kernel_basis().size());
}

namespace zddetail {

// g(x + P): translation taking P to the origin.
inline Poly translate_to_origin(const Poly& g, const std::vector<FieldElement>& P) {
    const RingPtr& ring = g.ring();
    Poly acc = Poly::zero(ring);
    for (const auto& [m, c] : g.terms()) {
        Poly term = Poly::constant(ring, c);
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            if (!m.e[i]) continue;
            Poly shifted_var = Poly::variable(ring, i) + Poly::constant(ring, P[i]);
            term = term * shifted_var.pow(m.e[i]);
        }
        acc = acc + term;
    }
    return acc;
}

inline std::vector<Monomial> monomials_below_degree(std::size_t nvars, unsigned N) {
    std::vector<Monomial> out;
    // iterate all exponent vectors with total degree < N
    std::vector<unsigned> idx(nvars, 0);
    for (;;) {
        unsigned total = std::accumulate(idx.begin(), idx.end(), 0u);
        if (total < N) {
            Monomial m(nvars);
            m.e = idx;
            out.push_back(std::move(m));
        }
        std::size_t v = 0;
        while (v < nvars) {
            if (++idx[v] < N) break;
            idx[v] = 0;
            ++v;
        }
        if (v == nvars) break;
    }
    std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
        return Monomial::StructLess{}(a, b);
    });
    return out;
}

// dim of the span of {x^a * g : g in gens, |a| <= max_shift} inside k[x]/m^N.
inline std::size_t truncated_ideal_dim(const std::vector<Poly>& translated, unsigned N,
                                       unsigned min_shift, unsigned max_shift, const Field& F,
                                       std::size_t nvars) {
    std::vector<Monomial> cells = monomials_below_degree(nvars, N);
    auto cell_index = [&](const Monomial& m) -> int {
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (cells[i] == m) return static_cast<int>(i);
        return -1;
    };
    std::vector<std::vector<FieldElement>> cols;
    std::vector<Monomial> shifts = monomials_below_degree(nvars, max_shift + 1);
    for (const auto& a : shifts) {
        unsigned da = a.total_degree();
        if (da < min_shift) continue;
        for (const auto& g : translated) {
            std::vector<FieldElement> col(cells.size(), F.zero());
            bool nonzero = false;
            for (const auto& [m, c] : g.terms()) {
                Monomial shifted = m * a;
                if (shifted.total_degree() >= N) continue;
                int idx = cell_index(shifted);
                col[static_cast<std::size_t>(idx)] = F.add(col[static_cast<std::size_t>(idx)], c);
                nonzero = true;
            }
            if (nonzero) cols.push_back(std::move(col));
        }
    }
    if (cols.empty()) return 0;
    Mat M(F, cells.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < cells.size(); ++i) M.at(i, j) = cols[j][i];
    return M.rank();
}

inline int min_generators_at_truncation(const std::vector<Poly>& translated, unsigned N,
                                        const Field& F, std::size_t nvars) {
    std::size_t dim_ideal = truncated_ideal_dim(translated, N, 0, N - 1, F, nvars);
    std::size_t dim_m_ideal = truncated_ideal_dim(translated, N, 1, N, F, nvars);
    return static_cast<int>(dim_ideal) - static_cast<int>(dim_m_ideal);
}

}  // namespace zddetail

// Nakayama minimal generator count of the localized ideal at P, computed in
// the truncated local ring k[x]/m_P^N; verified stable against N+1.
inline int local_min_generators(const Ideal& I, const std::vector<FieldElement>& P, unsigned N) {
    const Field& F = I.ring->field;
    const std::size_t nvars = I.ring->nvars();
    if (P.size() != nvars) throw Error(Errc::arity_mismatch, "point arity mismatch");
    std::vector<Poly> translated;
    for (const auto& g : I.gens) {
        if (!g.evaluate(P).is_zero())
            throw Error(Errc::not_a_point, "a generator does not vanish at the point");
        translated.push_back(zddetail::translate_to_origin(g, P));
    }
    if (N < 2) N = 2;
    int mu_n = zddetail::min_generators_at_truncation(translated, N, F, nvars);
    int mu_n1 = zddetail::min_generators_at_truncation(translated, N + 1, F, nvars);
    if (mu_n != mu_n1)
        throw Error(Errc::truncation_too_small,
                    "minimal generator count unstable between truncation orders " +
                        std::to_string(N) + " and " + std::to_string(N + 1));
    return mu_n;
}

struct RationalPointsResult {
    std::vector<std::vector<FieldElement>> points;  // coordinates over work_field
    unsigned extension_degree = 1;                  // degree over the input field
    Field work_field;
    std::optional<FieldEmbedding> embedding;        // present iff extension_degree > 1
};

// Univariate eliminant of coordinate j: the monic generator of I ∩ k[x_j].
inline UnivPoly eliminant(const Ideal& I, std::size_t j) {
    const std::size_t n = I.ring->nvars();
    // permute x_j to the last slot, eliminate the leading block
    std::vector<std::size_t> perm;
    for (std::size_t v = 0; v < n; ++v)
        if (v != j) perm.push_back(v);
    perm.push_back(j);
    std::vector<std::string> vars;
    for (auto v : perm) vars.push_back(I.ring->vars[v]);
    RingPtr permuted = make_ring(I.ring->field, vars);
    std::vector<Poly> gens;
    for (const auto& g : I.gens) gens.push_back(g.permute_vars(perm, permuted));
    GroebnerBasis gb = groebner(make_ideal(permuted, std::move(gens)),
                                MonomialOrder::Block(static_cast<unsigned>(n - 1)));
    std::optional<Poly> best;
    for (const auto& e : gb.elems) {
        bool univ = true;
        for (const auto& [m, c] : e.terms())
            for (std::size_t v = 0; v + 1 < n && univ; ++v)
                if (m.e[v]) univ = false;
        if (!univ) continue;
        if (!best || e.degree() < best->degree()) best = e;
    }
    if (!best) throw Error(Errc::not_zero_dimensional, "no eliminant: quotient not finite");
    std::vector<FieldElement> coeffs(static_cast<std::size_t>(best->degree()) + 1, I.ring->field.zero());
    for (const auto& [m, c] : best->terms()) coeffs[m.e[n - 1]] = c;
    UnivPoly u{I.ring->field, std::move(coeffs)};
    u.trim();
    return u;
}

// All points of V(I) over the smallest extension F_{q^k}, k <= max_ext, such
// that every eliminant splits; candidates from per-coordinate roots, verified
// by evaluation. Multiplicities are cross-checked against vs_dimension.
inline RationalPointsResult rational_points(const Ideal& I, unsigned max_ext, std::uint64_t seed = 0) {
    const Field& F = I.ring->field;
    const std::size_t n = I.ring->nvars();
    QuotientAlgebra A = quotient_algebra(I);
    RationalPointsResult out;
    out.work_field = F;
    if (A.dim() == 0) return out;  // empty scheme

    std::vector<UnivPoly> elims;
    unsigned k = 1;
    for (std::size_t j = 0; j < n; ++j) {
        UnivPoly e = eliminant(I, j);
        for (unsigned d : irreducible_factor_degrees(e)) k = std::lcm(k, d);
        elims.push_back(std::move(e));
    }
    if (k > max_ext)
        throw Error(Errc::extension_cap_exceeded,
                    "splitting needs extension degree " + std::to_string(k) + " > cap " +
                        std::to_string(max_ext));

    Field work = F;
    std::optional<FieldEmbedding> emb;
    if (k > 1) {
        work = Field::extension(F.characteristic(), F.ext_degree() * k, seed);
        emb.emplace(F, work);
    }
    out.extension_degree = k;
    out.work_field = work;
    out.embedding = emb;

    std::vector<std::vector<FieldElement>> coord_roots;
    for (const auto& e : elims) {
        UnivPoly ew = emb ? embed_univ(e, *emb) : e;
        coord_roots.push_back(roots_in_field(ew));
    }
    // embedded generators for candidate verification
    RingPtr work_ring = emb ? make_ring(work, I.ring->vars) : I.ring;
    std::vector<Poly> work_gens;
    for (const auto& g : I.gens) work_gens.push_back(emb ? embed_poly(g, *emb, work_ring) : g);

    std::vector<std::size_t> idx(n, 0);
    for (;;) {
        std::vector<FieldElement> cand;
        bool exhausted = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (coord_roots[j].empty()) { exhausted = true; break; }
            cand.push_back(coord_roots[j][idx[j]]);
        }
        if (exhausted) break;
        bool ok = true;
        for (const auto& g : work_gens)
            if (!g.evaluate(cand).is_zero()) { ok = false; break; }
        if (ok) out.points.push_back(std::move(cand));
        std::size_t j = 0;
        while (j < n) {
            if (++idx[j] < coord_roots[j].size()) break;
            idx[j] = 0;
            ++j;
        }
        if (j == n) break;
    }

    // all points are rational over the work field: lengths must account for
    // the whole quotient
    QuotientAlgebra Aw = emb ? extend_scalars(A, *emb) : A;
    long long total = 0;
    for (const auto& P : out.points) total += local_multiplicity(Aw, P);
    if (total != static_cast<long long>(A.dim()))
        throw Error(Errc::internal, "point multiplicities do not sum to the quotient dimension");
    return out;
}

// Independent point oracle for small fields: exhaustive evaluation sweep.
inline std::vector<std::vector<FieldElement>> points_by_sweep(const Ideal& I) {
    const Field& F = I.ring->field;
    auto card = F.cardinality();
    if (!card || *card > 10000) throw Error(Errc::field_too_large, "sweep oracle capped at |F| <= 10^4");
    const std::size_t n = I.ring->nvars();
    double size = 1;
    for (std::size_t i = 0; i < n; ++i) size *= static_cast<double>(*card);
    if (size > 1e7) throw Error(Errc::field_too_large, "sweep oracle capped at 10^7 candidate points");
    std::vector<FieldElement> elems = F.enumerate();
    std::vector<std::size_t> idx(n, 0);
    std::vector<std::vector<FieldElement>> out;
    for (;;) {
        std::vector<FieldElement> P;
        for (std::size_t j = 0; j < n; ++j) P.push_back(elems[idx[j]]);
        bool ok = true;
        for (const auto& g : I.gens)
            if (!g.evaluate(P).is_zero()) { ok = false; break; }
        if (ok) out.push_back(std::move(P));
        std::size_t j = 0;
        while (j < n) {
            if (++idx[j] < elems.size()) break;
            idx[j] = 0;
            ++j;
        }
        if (j == n) break;
    }
    return out;
}

struct LocalReport {
    std::vector<FieldElement> point;
    int multiplicity = 0;
    int mu = 0;        // minimal generator count of the localized ideal
    int socle_dim = 0;
    bool is_lci = false;
    bool is_gorenstein = false;
};

struct ZeroDimReport {
    long long total_length = 0;
    std::vector<LocalReport> locals;
    unsigned field_extension_used = 1;
};

// Full local analysis of an Artinian affine quotient.
inline ZeroDimReport analyze_zero_dim(const Ideal& I, unsigned max_ext, std::uint64_t seed = 0) {
    const std::size_t n = I.ring->nvars();
    QuotientAlgebra A = quotient_algebra(I);
    RationalPointsResult pts = rational_points(I, max_ext, seed);
    ZeroDimReport rep;
    rep.field_extension_used = pts.extension_degree;
    QuotientAlgebra Aw = pts.embedding ? extend_scalars(A, *pts.embedding) : A;
    RingPtr work_ring = Aw.ring;
    std::vector<Poly> work_gens;
    for (const auto& g : I.gens)
        work_gens.push_back(pts.embedding ? embed_poly(g, *pts.embedding, work_ring) : g);
    Ideal Iw = make_ideal(work_ring, work_gens);
    for (const auto& P : pts.points) {
        LocalReport lr;
        lr.point = P;
        lr.multiplicity = local_multiplicity(Aw, P);
        lr.mu = local_min_generators(Iw, P, static_cast<unsigned>(lr.multiplicity) + 1);
        lr.socle_dim = socle_dimension(Aw, P);
        lr.is_lci = (lr.mu == static_cast<int>(n));
        lr.is_gorenstein = (lr.socle_dim == 1);
        if (lr.is_lci && !lr.is_gorenstein)
            throw Error(Errc::violation, "local complete intersection must be Gorenstein");
        rep.total_length += lr.multiplicity;
        rep.locals.push_back(std::move(lr));
    }
    return rep;
}

}  // namespace ratdeg
