// Module algebra over the Artinian chain rings R = F_q[eps]/(eps^m): Smith
// diagonalization (R is a local principal ideal ring), NR-free ranks of
// finitely presented modules, kernels of surjections onto relation-carrying
// modules with the rank formula r - s + l, and invertible transition matrices
// between generating sets.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ratdeg/error.hpp"
#include "ratdeg/field.hpp"
#include "ratdeg/linalg.hpp"
#include "ratdeg/rng.hpp"

namespace ratdeg {

// Element of F_q[eps]/(eps^m): coefficient vector (c_0, ..., c_{m-1}).
struct ChainElem {
    std::vector<FieldElement> c;

    bool operator==(const ChainElem& o) const { return c == o.c; }
    bool operator!=(const ChainElem& o) const { return !(*this == o); }
};

class ChainRing {
public:
    ChainRing(Field base, unsigned m) : base_(std::move(base)), m_(m) {
        if (m < 2) throw Error(Errc::arity_mismatch, "chain ring needs nilpotency order m >= 2");
    }

    const Field& base() const { return base_; }
    unsigned order() const { return m_; }

    ChainElem zero() const { return {std::vector<FieldElement>(m_, base_.zero())}; }
    ChainElem one() const {
        ChainElem z = zero();
        z.c[0] = base_.one();
        return z;
    }
    ChainElem from_int(long long v) const {
        ChainElem z = zero();
        z.c[0] = base_.from_int(v);
        return z;
    }
    ChainElem scalar(const FieldElement& a) const {
        ChainElem z = zero();
        z.c[0] = a;
        return z;
    }
    ChainElem eps_power(unsigned a) const {
        ChainElem z = zero();
        if (a < m_) z.c[a] = base_.one();
        return z;
    }

    bool is_zero(const ChainElem& a) const {
        for (const auto& x : a.c)
            if (!x.is_zero()) return false;
        return true;
    }
    // eps-valuation; m for zero.
    unsigned val(const ChainElem& a) const {
        for (unsigned i = 0; i < m_; ++i)
            if (!a.c[i].is_zero()) return i;
        return m_;
    }
    bool is_unit(const ChainElem& a) const { return !a.c[0].is_zero(); }

    ChainElem add(const ChainElem& a, const ChainElem& b) const {
        ChainElem r = zero();
        for (unsigned i = 0; i < m_; ++i) r.c[i] = base_.add(a.c[i], b.c[i]);
        return r;
    }
    ChainElem sub(const ChainElem& a, const ChainElem& b) const {
        ChainElem r = zero();
        for (unsigned i = 0; i < m_; ++i) r.c[i] = base_.sub(a.c[i], b.c[i]);
        return r;
    }
    ChainElem neg(const ChainElem& a) const {
        ChainElem r = zero();
        for (unsigned i = 0; i < m_; ++i) r.c[i] = base_.neg(a.c[i]);
        return r;
    }
    ChainElem mul(const ChainElem& a, const ChainElem& b) const {
        ChainElem r = zero();
        for (unsigned i = 0; i < m_; ++i) {
            if (a.c[i].is_zero()) continue;
            for (unsigned j = 0; i + j < m_; ++j)
                r.c[i + j] = base_.add(r.c[i + j], base_.mul(a.c[i], b.c[j]));
        }
        return r;
    }
    ChainElem inv(const ChainElem& a) const {
        if (!is_unit(a)) throw Error(Errc::division_by_zero, "inverse of a non-unit in a chain ring");
        // invert layer by layer: find b with a*b = 1
        ChainElem b = zero();
        b.c[0] = base_.inv(a.c[0]);
        for (unsigned layer = 1; layer < m_; ++layer) {
            // coefficient of eps^layer in a*b must vanish
            FieldElement acc = base_.zero();
            for (unsigned i = 1; i <= layer; ++i) acc = base_.add(acc, base_.mul(a.c[i], b.c[layer - i]));
            b.c[layer] = base_.neg(base_.mul(acc, b.c[0]));
        }
        return b;
    }
    // Exact division; requires val(a) >= val(b), b != 0.
    ChainElem div_exact(const ChainElem& a, const ChainElem& b) const {
        unsigned vb = val(b);
        if (vb >= m_) throw Error(Errc::division_by_zero, "division by zero in a chain ring");
        if (val(a) < vb) throw Error(Errc::internal, "inexact chain-ring division");
        ChainElem ashift = zero(), bshift = zero();
        for (unsigned i = vb; i < m_; ++i) {
            ashift.c[i - vb] = a.c[i];
            bshift.c[i - vb] = b.c[i];
        }
        return mul(ashift, inv(bshift));
    }
    ChainElem mul_eps_power(const ChainElem& a, unsigned k) const {
        ChainElem r = zero();
        for (unsigned i = 0; i + k < m_; ++i) r.c[i + k] = a.c[i];
        return r;
    }

    FieldElement reduce_mod_eps(const ChainElem& a) const { return a.c[0]; }

    ChainElem sample(Rng& rng) const {
        ChainElem r = zero();
        for (auto& x : r.c) x = base_.sample(rng);
        return r;
    }

    std::string to_string(const ChainElem& a) const {
        std::string s;
        for (unsigned i = 0; i < m_; ++i) {
            if (a.c[i].is_zero()) continue;
            if (!s.empty()) s += "+";
            std::string coef = base_.to_string(a.c[i]);
            if (i == 0) s += coef;
            else {
                if (coef != "1") s += coef + "*";
                s += "e";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s.empty() ? "0" : s;
    }

    // All q^m elements (small rings only).
    std::vector<ChainElem> enumerate() const {
        std::vector<FieldElement> elems = base_.enumerate();
        double size = 1;
        for (unsigned i = 0; i < m_; ++i) size *= static_cast<double>(elems.size());
        if (size > 100000) throw Error(Errc::field_too_large, "chain ring enumeration capped");
        std::vector<ChainElem> out;
        std::vector<std::size_t> idx(m_, 0);
        for (;;) {
            ChainElem e = zero();
            for (unsigned i = 0; i < m_; ++i) e.c[i] = elems[idx[i]];
            out.push_back(std::move(e));
            unsigned j = 0;
            while (j < m_) {
                if (++idx[j] < elems.size()) break;
                idx[j] = 0;
                ++j;
            }
            if (j == m_) break;
        }
        return out;
    }

private:
    Field base_;
    unsigned m_;
};

// Dense matrix over a chain ring.
struct CMat {
    std::size_t rows = 0, cols = 0;
    std::vector<ChainElem> a;

    CMat() = default;
    CMat(const ChainRing& R, std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, R.zero()) {}

    ChainElem& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const ChainElem& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static CMat identity(const ChainRing& R, std::size_t n) {
        CMat m(R, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = R.one();
        return m;
    }

    bool operator==(const CMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

inline CMat cmat_mul(const ChainRing& R, const CMat& A, const CMat& B) {
    if (A.cols != B.rows) throw Error(Errc::arity_mismatch, "chain matrix product shape mismatch");
    CMat r(R, A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            if (R.is_zero(A.at(i, k))) continue;
            for (std::size_t j = 0; j < B.cols; ++j)
                r.at(i, j) = R.add(r.at(i, j), R.mul(A.at(i, k), B.at(k, j)));
        }
    return r;
}

inline Mat cmat_reduce(const ChainRing& R, const CMat& A) {
    Mat r(R.base(), A.rows, A.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) r.at(i, j) = R.reduce_mod_eps(A.at(i, j));
    return r;
}

inline std::vector<ChainElem> cmat_apply(const ChainRing& R, const CMat& A,
                                         const std::vector<ChainElem>& v) {
    std::vector<ChainElem> r(A.rows, R.zero());
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j)
            r[i] = R.add(r[i], R.mul(A.at(i, j), v[j]));
    return r;
}

struct SmithReport {
    CMat U, V, D;                 // U * A * V = D, U and V invertible
    std::vector<unsigned> diag_val;  // eps-valuation of each diagonal entry (m = zero)
};

// Diagonalization over the chain ring: every matrix is equivalent to
// diag(eps^{a_1}, ..., eps^{a_t}, 0, ...) with ascending valuations.
inline SmithReport smith_form(const ChainRing& R, CMat A) {
    const std::size_t rows = A.rows, cols = A.cols;
    CMat U = CMat::identity(R, rows);
    CMat V = CMat::identity(R, cols);
    CMat orig = A;
    const unsigned m = R.order();

    auto swap_rows = [&](CMat& M, std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < M.cols; ++c) std::swap(M.at(i, c), M.at(j, c));
    };
    auto swap_cols = [&](CMat& M, std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < M.rows; ++r) std::swap(M.at(r, i), M.at(r, j));
    };

    std::size_t t = 0;
    const std::size_t steps = std::min(rows, cols);
    for (; t < steps; ++t) {
        // pivot of minimal valuation in the trailing submatrix
        unsigned best_val = m;
        std::size_t bi = t, bj = t;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                unsigned v = R.val(A.at(i, j));
                if (v < best_val) { best_val = v; bi = i; bj = j; }
            }
        if (best_val >= m) break;  // submatrix is zero
        if (bi != t) { swap_rows(A, bi, t); swap_rows(U, bi, t); }
        if (bj != t) { swap_cols(A, bj, t); swap_cols(V, bj, t); }
        // normalize pivot to a pure eps power
        ChainElem unit_part = R.zero();
        for (unsigned i = best_val; i < m; ++i) unit_part.c[i - best_val] = A.at(t, t).c[i];
        ChainElem scale = R.inv(unit_part);
        for (std::size_t c = 0; c < cols; ++c) A.at(t, c) = R.mul(scale, A.at(t, c));
        for (std::size_t c = 0; c < U.cols; ++c) U.at(t, c) = R.mul(scale, U.at(t, c));
        // clear the pivot column (all entries divisible: pivot valuation is minimal)
        for (std::size_t i = t + 1; i < rows; ++i) {
            if (R.is_zero(A.at(i, t))) continue;
            ChainElem f = R.div_exact(A.at(i, t), A.at(t, t));
            for (std::size_t c = 0; c < cols; ++c)
                A.at(i, c) = R.sub(A.at(i, c), R.mul(f, A.at(t, c)));
            for (std::size_t c = 0; c < U.cols; ++c)
                U.at(i, c) = R.sub(U.at(i, c), R.mul(f, U.at(t, c)));
        }
        // clear the pivot row
        for (std::size_t j = t + 1; j < cols; ++j) {
            if (R.is_zero(A.at(t, j))) continue;
            ChainElem f = R.div_exact(A.at(t, j), A.at(t, t));
            for (std::size_t r = 0; r < rows; ++r)
                A.at(r, j) = R.sub(A.at(r, j), R.mul(f, A.at(r, t)));
            for (std::size_t r = 0; r < V.rows; ++r)
                V.at(r, j) = R.sub(V.at(r, j), R.mul(f, V.at(r, t)));
        }
    }

    // ascending valuations along the diagonal
    for (std::size_t i = 0; i < steps; ++i) {
        for (std::size_t j = i + 1; j < steps; ++j) {
            if (R.val(A.at(j, j)) < R.val(A.at(i, i))) {
                swap_rows(A, i, j);
                swap_rows(U, i, j);
                swap_cols(A, i, j);
                swap_cols(V, i, j);
            }
        }
    }

    SmithReport rep;
    rep.U = std::move(U);
    rep.V = std::move(V);
    rep.D = std::move(A);
    for (std::size_t i = 0; i < steps; ++i) rep.diag_val.push_back(R.val(rep.D.at(i, i)));

    if (!(cmat_mul(R, cmat_mul(R, rep.U, orig), rep.V) == rep.D))
        throw Error(Errc::internal, "Smith postcondition U*A*V = D failed");
    if (cmat_reduce(R, rep.U).rank() != rows || cmat_reduce(R, rep.V).rank() != cols)
        throw Error(Errc::internal, "Smith transforms are not invertible");
    return rep;
}

// Invert a matrix that is invertible mod eps, by elimination on unit pivots.
inline CMat cmat_inverse(const ChainRing& R, CMat A) {
    if (A.rows != A.cols) throw Error(Errc::arity_mismatch, "inverse of a non-square matrix");
    const std::size_t n = A.rows;
    CMat inv = CMat::identity(R, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        for (std::size_t i = col; i < n; ++i)
            if (R.is_unit(A.at(i, col))) { piv = i; break; }
        if (piv == n) throw Error(Errc::not_generating, "matrix is not invertible over the chain ring");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(A.at(piv, j), A.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        }
        ChainElem s = R.inv(A.at(col, col));
        for (std::size_t j = 0; j < n; ++j) {
            A.at(col, j) = R.mul(s, A.at(col, j));
            inv.at(col, j) = R.mul(s, inv.at(col, j));
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || R.is_zero(A.at(i, col))) continue;
            ChainElem f = A.at(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                A.at(i, j) = R.sub(A.at(i, j), R.mul(f, A.at(col, j)));
                inv.at(i, j) = R.sub(inv.at(i, j), R.mul(f, inv.at(col, j)));
            }
        }
    }
    return inv;
}

// Generators of the kernel of A as a map R^cols -> R^rows.
inline std::vector<std::vector<ChainElem>> cmat_kernel(const ChainRing& R, const CMat& A) {
    SmithReport s = smith_form(R, A);
    const unsigned m = R.order();
    std::vector<std::vector<ChainElem>> gens;
    for (std::size_t j = 0; j < A.cols; ++j) {
        std::optional<unsigned> needed;  // eps power making column j a kernel element
        if (j < s.diag_val.size()) {
            unsigned v = s.diag_val[j];
            if (v == 0) continue;            // unit pivot: no kernel contribution
            if (v >= m) needed = 0;          // zero pivot: free column
            else needed = m - v;             // torsion: eps^{m-v} kills it
        } else {
            needed = 0;  // column beyond the diagonal
        }
        std::vector<ChainElem> gen(A.cols, R.zero());
        gen[j] = R.eps_power(*needed);
        // transport through V
        std::vector<ChainElem> x = cmat_apply(R, s.V, gen);
        gens.push_back(std::move(x));
    }
    return gens;
}

// One solution of A x = b over the chain ring, or nullopt.
inline std::optional<std::vector<ChainElem>> solve_linear(const ChainRing& R, const CMat& A,
                                                          const std::vector<ChainElem>& b) {
    SmithReport s = smith_form(R, A);
    std::vector<ChainElem> w = cmat_apply(R, s.U, b);
    std::vector<ChainElem> z(A.cols, R.zero());
    for (std::size_t i = 0; i < A.rows; ++i) {
        ChainElem d = (i < s.diag_val.size() && i < A.cols) ? s.D.at(i, i) : R.zero();
        if (R.is_zero(d)) {
            if (!R.is_zero(w[i])) return std::nullopt;
            continue;
        }
        if (R.val(w[i]) < R.val(d)) return std::nullopt;
        z[i] = R.div_exact(w[i], d);
    }
    return cmat_apply(R, s.V, z);
}

// M = R^generators / column span of the relation matrix.
struct PresentedModule {
    ChainRing ring;
    std::size_t generators = 0;
    CMat relations;  // generators x (number of relations); may have 0 columns

    PresentedModule(ChainRing R, std::size_t g, CMat rel)
        : ring(std::move(R)), generators(g), relations(std::move(rel)) {
        if (relations.cols > 0 && relations.rows != generators)
            throw Error(Errc::arity_mismatch, "relation matrix height must match generator count");
        if (relations.cols == 0) relations = CMat(ring, generators, 0);
    }
};

struct NrFreeRank {
    unsigned rank = 0;
    // witness generating set, columns expressed in the ambient generators; its
    // relation matrix is diagonal with the listed nilpotent (or zero) entries
    CMat witness_generators;
    std::vector<unsigned> witness_relation_vals;  // in [1, m]; m encodes zero
};

// NR-free rank: generators left after removing unit pivots of the Smith form
// of the relation matrix; equals dim_{F_q} M/eps M (Nakayama over a local ring).
inline NrFreeRank nr_free_rank(const PresentedModule& M) {
    const ChainRing& R = M.ring;
    SmithReport s = smith_form(R, M.relations);
    NrFreeRank out;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < M.generators; ++i) {
        unsigned v = (i < s.diag_val.size()) ? s.diag_val[i] : R.order();
        if (v == 0) continue;  // unit pivot: generator is redundant
        kept.push_back(i);
        if (v < R.order()) out.witness_relation_vals.push_back(v);
        else out.witness_relation_vals.push_back(R.order());
    }
    out.rank = static_cast<unsigned>(kept.size());
    // cross-check against the Nakayama count over the residue field
    Mat red = cmat_reduce(R, M.relations);
    std::size_t nakayama = M.generators - red.rank();
    if (nakayama != out.rank)
        throw Error(Errc::internal, "Smith rank disagrees with dim M/eps M");
    // witness generators: the columns of U^{-1} at the kept indices
    CMat Uinv = cmat_inverse(R, s.U);
    out.witness_generators = CMat(R, M.generators, kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c)
        for (std::size_t r = 0; r < M.generators; ++r)
            out.witness_generators.at(r, c) = Uinv.at(r, kept[c]);
    return out;
}

struct KernelResult {
    PresentedModule module;                          // presentation of ker(phi)
    std::vector<std::vector<ChainElem>> generators;  // kernel generators in R^r
    unsigned predicted_rank = 0;                     // r - s + l
    unsigned computed_rank = 0;
    bool is_free = false;                            // no nilpotent torsion in the presentation
};

// Kernel of a surjection phi: R^r ->> N, where N = R^s with relations
// eps^e n_i = 0 for i < l. Surjectivity is checked mod eps (Nakayama); the
// computed kernel's NR-free rank must equal r - s + l, and the kernel must be
// free when l = 0.
inline KernelResult kernel_of_surjection(const ChainRing& R, unsigned r, unsigned s, unsigned l,
                                         unsigned e, const CMat& phi) {
    if (phi.rows != s || phi.cols != r)
        throw Error(Errc::arity_mismatch, "phi must be an s x r matrix");
    if (l > s) throw Error(Errc::arity_mismatch, "relation count l must be at most s");
    if (l > 0 && (e < 1 || e >= R.order()))
        throw Error(Errc::arity_mismatch, "relation scalar must be eps^e with 1 <= e <= m-1");
    if (cmat_reduce(R, phi).rank() != s)
        throw Error(Errc::not_surjective, "phi is not surjective mod eps");

    // kernel of R^r -> N as the x-part of the kernel of [phi | eps^e relations]
    CMat B(R, s, r + l);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < r; ++j) B.at(i, j) = phi.at(i, j);
    for (std::size_t i = 0; i < l; ++i) B.at(i, r + i) = R.eps_power(e);

    std::vector<std::vector<ChainElem>> gens;
    for (auto& z : cmat_kernel(R, B)) {
        std::vector<ChainElem> x(z.begin(), z.begin() + r);
        bool zero = true;
        for (const auto& v : x)
            if (!R.is_zero(v)) { zero = false; break; }
        if (!zero) gens.push_back(std::move(x));
    }

    // presentation of the kernel: syzygies among its generators
    CMat G(R, r, gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (std::size_t i = 0; i < r; ++i) G.at(i, j) = gens[j][i];
    auto syz = cmat_kernel(R, G);
    CMat rel(R, gens.size(), syz.size());
    for (std::size_t j = 0; j < syz.size(); ++j)
        for (std::size_t i = 0; i < gens.size(); ++i) rel.at(i, j) = syz[j][i];

    KernelResult out{PresentedModule(R, gens.size(), rel), std::move(gens), 0, 0, false};
    out.predicted_rank = r - s + l;
    NrFreeRank nr = nr_free_rank(out.module);
    out.computed_rank = nr.rank;
    out.is_free = true;
    for (unsigned v : nr.witness_relation_vals)
        if (v < R.order()) out.is_free = false;
    if (out.computed_rank != out.predicted_rank)
        throw Error(Errc::verification_failed,
                    "kernel rank " + std::to_string(out.computed_rank) + " differs from r-s+l = " +
                        std::to_string(out.predicted_rank));
    if (l == 0 && !out.is_free)
        throw Error(Errc::verification_failed, "kernel of a surjection onto a free module must be free");
    return out;
}

// Rank bookkeeping of the order-of-operations phenomenon: taking the kernel
// first and then reducing mod nilpotents yields rank r-s+l, while reducing
// first yields r-s; the ranks differ by exactly l.
inline std::pair<unsigned, unsigned> remark_order_of_operations(const ChainRing& R, unsigned r,
                                                                unsigned s, unsigned l, unsigned e,
                                                                const CMat& phi) {
    KernelResult k = kernel_of_surjection(R, r, s, l, e, phi);
    Mat red = cmat_reduce(R, phi);
    unsigned reduce_then_kernel = static_cast<unsigned>(red.kernel_basis().size());
    if (k.computed_rank != reduce_then_kernel + l)
        throw Error(Errc::verification_failed, "rank discrepancy is not exactly l");
    return {k.computed_rank, reduce_then_kernel};
}

struct TransitionResult {
    CMat T;      // invertible, gens2 = T * gens1 inside M (columnwise)
    Mat T_red;   // reduction mod eps, relating the reduced generating sets
};

namespace cmdetail {

// Column-span membership over F_q: does v lie in the span of the columns of A
// together with the columns of B?
inline bool spans_everything(const Mat& G, const Mat& A) {
    Mat aug(G.field(), G.rows(), G.cols() + A.cols());
    for (std::size_t i = 0; i < G.rows(); ++i) {
        for (std::size_t j = 0; j < G.cols(); ++j) aug.at(i, j) = G.at(i, j);
        for (std::size_t j = 0; j < A.cols(); ++j) aug.at(i, G.cols() + j) = A.at(i, j);
    }
    return aug.rank() == G.rows();
}

}  // namespace cmdetail

// Invertible transition matrix between two generating sets of the same size
// (Nakayama-checked mod eps, then lifted eps-adically and verified exactly).
inline TransitionResult transition_matrix(const PresentedModule& M,
                                          const std::vector<std::vector<ChainElem>>& gens1,
                                          const std::vector<std::vector<ChainElem>>& gens2) {
    const ChainRing& R = M.ring;
    const Field& F = R.base();
    if (gens1.size() != gens2.size())
        throw Error(Errc::not_generating, "generating sets must have equal size");
    const std::size_t t = gens1.size();
    const std::size_t g = M.generators;
    for (const auto& v : gens1)
        if (v.size() != g) throw Error(Errc::arity_mismatch, "generator has wrong ambient arity");
    for (const auto& v : gens2)
        if (v.size() != g) throw Error(Errc::arity_mismatch, "generator has wrong ambient arity");

    CMat G1(R, g, t), G2(R, g, t);
    for (std::size_t j = 0; j < t; ++j)
        for (std::size_t i = 0; i < g; ++i) {
            G1.at(i, j) = gens1[j][i];
            G2.at(i, j) = gens2[j][i];
        }
    Mat G1r = cmat_reduce(R, G1), G2r = cmat_reduce(R, G2), Ar = cmat_reduce(R, M.relations);
    if (!cmdetail::spans_everything(G1r, Ar) || !cmdetail::spans_everything(G2r, Ar))
        throw Error(Errc::not_generating, "a list does not generate the module (checked mod eps)");

    // Build an invertible T_red over F_q with G1r * T_red = G2r modulo the
    // reduced relations: map ker(q2) onto ker(q1) and solve on a complement.
    auto kernel_cols = [&](const Mat& G) {
        Mat aug(F, g, t + Ar.cols());
        for (std::size_t i = 0; i < g; ++i) {
            for (std::size_t j = 0; j < t; ++j) aug.at(i, j) = G.at(i, j);
            for (std::size_t j = 0; j < Ar.cols(); ++j) aug.at(i, t + j) = Ar.at(i, j);
        }
        auto full = aug.kernel_basis();
        // project to the first t coordinates and extract a basis
        Mat proj(F, t, full.size());
        for (std::size_t j = 0; j < full.size(); ++j)
            for (std::size_t i = 0; i < t; ++i) proj.at(i, j) = full[j][i];
        // column space basis via row reduction of the transpose
        Mat tr(F, full.size(), t);
        for (std::size_t i = 0; i < full.size(); ++i)
            for (std::size_t j = 0; j < t; ++j) tr.at(i, j) = proj.at(j, i);
        std::vector<std::size_t> piv;
        tr.rref(&piv);
        std::vector<std::vector<FieldElement>> basis;
        for (std::size_t rrow = 0; rrow < piv.size(); ++rrow) {
            std::vector<FieldElement> v(t, F.zero());
            for (std::size_t j = 0; j < t; ++j) v[j] = tr.at(rrow, j);
            basis.push_back(std::move(v));
        }
        return basis;
    };
    auto k1 = kernel_cols(G1r);
    auto k2 = kernel_cols(G2r);
    if (k1.size() != k2.size()) throw Error(Errc::internal, "kernel dimensions differ for generating sets");

    // complement of k2 inside F_q^t
    std::vector<std::vector<FieldElement>> c2;
    {
        std::vector<std::vector<FieldElement>> current = k2;
        for (std::size_t cand = 0; cand < t && current.size() < t; ++cand) {
            std::vector<FieldElement> v(t, F.zero());
            v[cand] = F.one();
            Mat test(F, t, current.size() + 1);
            for (std::size_t j = 0; j < current.size(); ++j)
                for (std::size_t i = 0; i < t; ++i) test.at(i, j) = current[j][i];
            for (std::size_t i = 0; i < t; ++i) test.at(i, current.size()) = v[i];
            if (test.rank() == current.size() + 1) {
                current.push_back(v);
                c2.push_back(v);
            }
        }
    }

    // images: basis of F_q^t adapted to (k2, c2), mapped to (k1, solved preimages)
    std::vector<std::vector<FieldElement>> domain = k2, image = k1;
    for (const auto& v : c2) {
        // solve G1r * c + Ar * y = G2r * v over F_q
        std::vector<FieldElement> rhs(g, F.zero());
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < t; ++j)
                rhs[i] = F.add(rhs[i], F.mul(G2r.at(i, j), v[j]));
        Mat sys(F, g, t + Ar.cols());
        for (std::size_t i = 0; i < g; ++i) {
            for (std::size_t j = 0; j < t; ++j) sys.at(i, j) = G1r.at(i, j);
            for (std::size_t j = 0; j < Ar.cols(); ++j) sys.at(i, t + j) = Ar.at(i, j);
        }
        auto sol = sys.solve(rhs);
        if (!sol) throw Error(Errc::internal, "mod-eps transition solve failed despite spanning check");
        std::vector<FieldElement> c(sol->begin(), sol->begin() + t);
        domain.push_back(v);
        image.push_back(std::move(c));
    }
    // T_red * domain_i = image_i  =>  T_red = [image] * [domain]^{-1}
    Mat Dm(F, t, t), Im(F, t, t);
    for (std::size_t j = 0; j < t; ++j)
        for (std::size_t i = 0; i < t; ++i) {
            Dm.at(i, j) = domain[j][i];
            Im.at(i, j) = image[j][i];
        }
    // invert Dm by solving per column
    Mat T_red(F, t, t);
    {
        Mat aug(F, t, 2 * t);
        for (std::size_t i = 0; i < t; ++i) {
            for (std::size_t j = 0; j < t; ++j) aug.at(i, j) = Dm.at(i, j);
            aug.at(i, t + i) = F.one();
        }
        aug.rref();
        Mat Dinv(F, t, t);
        for (std::size_t i = 0; i < t; ++i)
            for (std::size_t j = 0; j < t; ++j) Dinv.at(i, j) = aug.at(i, t + j);
        T_red = Im * Dinv;
    }

    // lift and correct by eps multiples: T = lift(T_red) + eps * X, where each
    // column of X solves [eps*G1 | A] * (x; y) = G2_j - G1 * T_j
    CMat T(R, t, t);
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j) T.at(i, j) = R.scalar(T_red.at(i, j));
    CMat sys(R, g, t + M.relations.cols);
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = 0; j < t; ++j) sys.at(i, j) = R.mul_eps_power(G1.at(i, j), 1);
        for (std::size_t j = 0; j < M.relations.cols; ++j) sys.at(i, t + j) = M.relations.at(i, j);
    }
    for (std::size_t j = 0; j < t; ++j) {
        std::vector<ChainElem> err(g, R.zero());
        for (std::size_t i = 0; i < g; ++i) {
            ChainElem acc = R.zero();
            for (std::size_t kk = 0; kk < t; ++kk) acc = R.add(acc, R.mul(G1.at(i, kk), T.at(kk, j)));
            err[i] = R.sub(G2.at(i, j), acc);
        }
        auto sol = solve_linear(R, sys, err);
        if (!sol) throw Error(Errc::internal, "eps-adic transition correction failed");
        for (std::size_t i = 0; i < t; ++i)
            T.at(i, j) = R.add(T.at(i, j), R.mul_eps_power((*sol)[i], 1));
    }

    // exact verification: each G2 column minus G1*T column lies in the relation span
    for (std::size_t j = 0; j < t; ++j) {
        std::vector<ChainElem> err(g, R.zero());
        for (std::size_t i = 0; i < g; ++i) {
            ChainElem acc = R.zero();
            for (std::size_t kk = 0; kk < t; ++kk) acc = R.add(acc, R.mul(G1.at(i, kk), T.at(kk, j)));
            err[i] = R.sub(G2.at(i, j), acc);
        }
        bool zero = true;
        for (const auto& v : err)
            if (!R.is_zero(v)) { zero = false; break; }
        if (!zero) {
            if (!solve_linear(R, M.relations, err))
                throw Error(Errc::verification_failed, "transition matrix does not relate the generators");
        }
    }
    if (cmat_reduce(R, T).rank() != t)
        throw Error(Errc::verification_failed, "transition matrix is not invertible");

    TransitionResult out;
    out.T = std::move(T);
    out.T_red = cmat_reduce(R, out.T);
    return out;
}

}  // namespace ratdeg
