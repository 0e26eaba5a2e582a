// Degree analysis of rational self-maps of projective space: base-locus
// length delta, the bound d^n - delta, exact degree via fiber-scheme lengths
// at sampled targets, the hyperplane-pullback Bezout self-check, and censuses
// of random maps. Census rows are independent tasks with derived seeds,
// merged deterministically by row index.
#pragma once

#include <atomic>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "ratdeg/error.hpp"
#include "ratdeg/ideal.hpp"
#include "ratdeg/rng.hpp"
#include "ratdeg/zerodim.hpp"

namespace ratdeg {

struct RationalMap {
    RingPtr ring;
    int n = 0;                     // projective dimension: ring has n+1 variables
    int d = 0;                     // common degree of the components
    std::vector<Poly> components;  // n+1 homogeneous polynomials, not all zero
};

inline Ideal component_ideal(const RationalMap& f) {
    std::vector<Poly> gens = f.components;
    return make_ideal(f.ring, std::move(gens));
}

// Validate a self-map of P^n: equal homogeneous degrees, finite undefined
// set. A common factor shows up as a positive-dimensional saturated base
// locus and is rejected here.
inline RationalMap make_rational_map(std::vector<Poly> components) {
    if (components.empty()) throw Error(Errc::arity_mismatch, "a map needs components");
    RingPtr ring = components.front().ring();
    for (const auto& c : components)
        if (!c.ring()->same(*ring)) throw Error(Errc::ring_mismatch, "components from different rings");
    if (components.size() != ring->nvars())
        throw Error(Errc::arity_mismatch, "a self-map of P^n needs n+1 components over n+1 variables");
    int d = -1;
    bool any_nonzero = false;
    for (std::size_t i = 0; i < components.size(); ++i) {
        auto h = components[i].homogeneity();
        if (!h.homogeneous)
            throw Error(Errc::not_homogeneous, "component " + std::to_string(i) + " is not homogeneous");
        if (h.is_zero_poly) continue;
        any_nonzero = true;
        if (d < 0) d = h.degree;
        else if (d != h.degree)
            throw Error(Errc::mixed_degrees, "component " + std::to_string(i) + " has a different degree");
    }
    if (!any_nonzero) throw Error(Errc::arity_mismatch, "all components are zero");
    if (d < 1) throw Error(Errc::mixed_degrees, "components must have degree >= 1");

    RationalMap f;
    f.ring = ring;
    f.n = static_cast<int>(ring->nvars()) - 1;
    f.d = d;
    f.components = std::move(components);

    Ideal sat = saturate_irrelevant(component_ideal(f));
    if (krull_dim(sat) > 1)
        throw Error(Errc::positive_dimensional_base_locus,
                    "undefined set is not finite (common factor or positive-dimensional base locus); "
                    "degree analysis inapplicable");
    return f;
}

struct BaseLocusPoint {
    int chart = -1;                         // chart of the last nonzero coordinate
    LocalReport local;                      // affine data in that chart
    std::vector<FieldElement> projective;   // homogeneous representative, 1 in the chart slot
};

struct BaseLocusResult {
    long long delta = 0;
    std::vector<BaseLocusPoint> points;
    unsigned extension_degree = 1;
    bool all_lci = true;
    bool all_gorenstein = true;
};

// delta and per-point local reports, computed chart-wise; each projective
// point is assigned to the chart of its last nonzero coordinate.
inline BaseLocusResult base_locus(const RationalMap& f, unsigned max_ext, std::uint64_t seed = 0) {
    Ideal sat = saturate_irrelevant(component_ideal(f));
    BaseLocusResult out;
    out.delta = hilbert_length(sat);

    const std::size_t nv = f.ring->nvars();
    long long assigned_total = 0;
    for (std::size_t chart = 0; chart < nv; ++chart) {
        std::vector<Poly> chart_gens;
        for (const auto& g : sat.gens) chart_gens.push_back(g.dehomogenize(chart));
        if (chart_gens.empty()) throw Error(Errc::internal, "saturated base ideal has no generators");
        Ideal J = make_ideal(chart_gens.front().ring(), chart_gens);
        GroebnerBasis jgb = groebner(J, MonomialOrder::Grevlex());
        bool unit = false;
        for (const auto& e : jgb.elems)
            if (e.leading_term(jgb.order).first.is_one()) unit = true;
        if (unit) continue;  // chart misses the base locus

        ZeroDimReport zr = analyze_zero_dim(J, max_ext, seed + chart);
        out.extension_degree = std::max(out.extension_degree, zr.field_extension_used);
        for (auto& lr : zr.locals) {
            // chart coordinates omit the chart variable; original index w > chart
            // sits at position w-1
            bool assigned = true;
            for (std::size_t w = chart + 1; w < nv && assigned; ++w)
                if (!lr.point[w - 1].is_zero()) assigned = false;
            if (!assigned) continue;
            BaseLocusPoint bp;
            bp.chart = static_cast<int>(chart);
            std::vector<FieldElement> proj;
            std::size_t k = 0;
            for (std::size_t v = 0; v < nv; ++v) {
                if (v == chart) proj.push_back(one_like(lr.point.front()));
                else proj.push_back(lr.point[k++]);
            }
            bp.projective = std::move(proj);
            out.all_lci = out.all_lci && lr.is_lci;
            out.all_gorenstein = out.all_gorenstein && lr.is_gorenstein;
            assigned_total += lr.multiplicity;
            bp.local = std::move(lr);
            out.points.push_back(std::move(bp));
        }
    }
    if (assigned_total != out.delta)
        throw Error(Errc::internal, "assigned local lengths do not sum to delta");
    return out;
}

namespace rmdetail {

// Random projective point (not all coordinates zero).
inline std::vector<FieldElement> random_projective_point(const Field& F, std::size_t nv, Rng& rng) {
    for (;;) {
        std::vector<FieldElement> P;
        bool nonzero = false;
        for (std::size_t i = 0; i < nv; ++i) {
            P.push_back(F.sample(rng));
            nonzero = nonzero || !P.back().is_zero();
        }
        if (nonzero) return P;
    }
}

// Ideal of the fiber over target P: all 2x2 minors P_j F_i - P_i F_j.
inline Ideal fiber_ideal(const RationalMap& f, const std::vector<FieldElement>& target) {
    std::vector<Poly> gens;
    for (std::size_t i = 0; i < f.components.size(); ++i) {
        for (std::size_t j = i + 1; j < f.components.size(); ++j) {
            Poly m = f.components[i].scaled(target[j]) - f.components[j].scaled(target[i]);
            if (!m.is_zero()) gens.push_back(std::move(m));
        }
    }
    return make_ideal(f.ring, std::move(gens));
}

// I : J^infinity as the intersection of the single-generator saturations.
inline Ideal saturate_by_ideal(const Ideal& I, const Ideal& J) {
    std::optional<Ideal> acc;
    for (const auto& g : J.gens) {
        Ideal s = saturate(I, g);
        if (!acc) acc = std::move(s);
        else acc = intersect(*acc, s);
    }
    if (!acc) throw Error(Errc::internal, "saturation by the zero ideal");
    return *acc;
}

}  // namespace rmdetail

struct FiberSample {
    std::vector<FieldElement> target;
    long long fiber_length = 0;
    long long hyperplane_length = 0;  // length of E_P, expected d^n
};

// Length of E_P: the complete intersection of the n hyperplane pullbacks
// cutting out the target; Bezout expects exactly d^n.
inline long long degree_via_hyperplanes(const RationalMap& f, const std::vector<FieldElement>& target) {
    const std::size_t nv = f.ring->nvars();
    std::size_t pivot = nv;
    for (std::size_t j = nv; j-- > 0;) {
        if (!target[j].is_zero()) { pivot = j; break; }
    }
    if (pivot == nv) throw Error(Errc::arity_mismatch, "target must be a projective point");
    std::vector<Poly> pullbacks;
    for (std::size_t i = 0; i < nv; ++i) {
        if (i == pivot) continue;
        Poly h = f.components[i].scaled(target[pivot]) - f.components[pivot].scaled(target[i]);
        if (!h.is_zero()) pullbacks.push_back(std::move(h));
    }
    Ideal ep = make_ideal(f.ring, std::move(pullbacks));
    Ideal sat = saturate_irrelevant(ep);
    if (krull_dim(sat) > 1)
        throw Error(Errc::positive_dimensional, "hyperplane pullback scheme is not finite");
    return hilbert_length(sat);
}

struct DegreeSamples {
    long long degree = 0;  // max of the sampled residual fiber lengths
    std::vector<FiberSample> samples;
};

// Exact degree as the generic fiber length: per trial, push a random source
// through the map, form the fiber ideal of the image point, saturate away the
// base locus and the irrelevant ideal, and record the length. The base-locus
// contribution to E_P only jumps up at special targets (E_f sits inside every
// E_P), so the residual length is at most the degree for every target and
// attains it at general ones: the maximum over honest samples is the generic
// value with high probability, and never an overestimate.
inline DegreeSamples degree_exact(const RationalMap& f, int trials, std::uint64_t seed,
                                  bool with_hyperplane_check = false) {
    if (trials < 1) throw Error(Errc::arity_mismatch, "need at least one trial");
    const Field& F = f.ring->field;
    const std::size_t nv = f.ring->nvars();
    Rng rng = derive_rng(seed, 0x66696265);
    Ideal base = component_ideal(f);
    DegreeSamples out;
    for (int t = 0; t < trials; ++t) {
        // Special targets (in the image of a contracted subvariety) carry
        // positive-dimensional fibers even for dominant maps; redraw on those.
        // Only persistent failure signals a non-dominant map.
        bool found = false;
        bool saw_positive_dimensional = false;
        for (int attempt = 0; attempt < 100 && !found; ++attempt) {
            std::vector<FieldElement> Q = rmdetail::random_projective_point(F, nv, rng);
            std::vector<FieldElement> target;
            bool defined = false;
            for (const auto& c : f.components) {
                target.push_back(c.evaluate(Q));
                defined = defined || !target.back().is_zero();
            }
            if (!defined) continue;
            Ideal fib = rmdetail::fiber_ideal(f, target);
            Ideal away_from_base = rmdetail::saturate_by_ideal(fib, base);
            Ideal sat = saturate_irrelevant(away_from_base);
            if (krull_dim(sat) > 1) {
                saw_positive_dimensional = true;
                continue;
            }
            FiberSample s;
            s.target = target;
            s.fiber_length = hilbert_length(sat);
            if (s.fiber_length == 0)
                throw Error(Errc::internal, "sampled fiber is empty despite a valid source");
            if (with_hyperplane_check) s.hyperplane_length = degree_via_hyperplanes(f, target);
            out.samples.push_back(std::move(s));
            found = true;
        }
        if (!found) {
            if (saw_positive_dimensional)
                throw Error(Errc::positive_dimensional_fiber,
                            "every sampled fiber is positive-dimensional; map looks non-dominant");
            throw Error(Errc::no_valid_source,
                        "no source point with a defined image in 100 draws; field too small");
        }
    }
    out.degree = out.samples.front().fiber_length;
    for (const auto& s : out.samples) out.degree = std::max(out.degree, s.fiber_length);
    return out;
}

// Coefficientwise transport of a map into an extension field.
inline RationalMap map_to_extension(const RationalMap& f, const FieldEmbedding& emb) {
    RingPtr big = make_ring(emb.target(), f.ring->vars);
    RationalMap g;
    g.ring = big;
    g.n = f.n;
    g.d = f.d;
    for (const auto& c : f.components) g.components.push_back(embed_poly(c, emb, big));
    return g;
}

struct DegreeReport {
    long long delta = 0;
    long long bound = 0;  // d^n - delta
    long long degree_exact = 0;
    bool lci_all = true;
    bool gorenstein_all = true;
    BaseLocusResult base;
    std::vector<FiberSample> samples;
    long long bezout_check = 0;          // observed E_P length (d^n at general targets)
    unsigned sampling_extension = 1;     // largest extension degree used for targets
    std::vector<std::string> violations;
};

inline long long int_pow(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// Full audit: delta, bound, flags, exact degree, and the equivalence checks.
// Any breach of the degree inequality or of the equality <=> lci <=>
// Gorenstein equivalences is recorded as a violation. When a forced equality
// is undershot (which can only be a sampling artifact: residual lengths never
// exceed the degree), the targets are re-sampled over quadratic and cubic
// extensions before a violation is reported — over tiny fields every rational
// target can be special.
inline DegreeReport analyze(const RationalMap& f, int trials, std::uint64_t seed, unsigned max_ext) {
    DegreeReport rep;
    rep.base = base_locus(f, max_ext, seed);
    rep.delta = rep.base.delta;
    rep.bound = int_pow(f.d, f.n) - rep.delta;
    DegreeSamples ds = degree_exact(f, trials, seed, /*with_hyperplane_check=*/true);
    rep.degree_exact = ds.degree;
    rep.samples = std::move(ds.samples);
    rep.lci_all = rep.base.all_lci;
    rep.gorenstein_all = rep.base.all_gorenstein;
    rep.bezout_check = rep.samples.front().hyperplane_length;

    bool small_lengths = true;
    for (const auto& p : rep.base.points)
        if (p.local.multiplicity > 2) small_lengths = false;
    bool equality_forced = rep.lci_all || small_lengths;
    const Field& F = f.ring->field;
    for (unsigned k = 2; equality_forced && rep.degree_exact < rep.bound && k <= 3; ++k) {
        if (F.ext_degree() * k > 12) break;
        Field big = Field::extension(F.characteristic(), F.ext_degree() * k, seed);
        FieldEmbedding emb(F, big);
        RationalMap fbig = map_to_extension(f, emb);
        DegreeSamples more = degree_exact(fbig, trials, derive_rng(seed, k).next(), true);
        rep.degree_exact = std::max(rep.degree_exact, more.degree);
        rep.sampling_extension = k;
        for (auto& s : more.samples) rep.samples.push_back(std::move(s));
    }

    const long long dn = int_pow(f.d, f.n);
    if (rep.degree_exact > rep.bound)
        rep.violations.push_back("degree " + std::to_string(rep.degree_exact) +
                                 " exceeds bound " + std::to_string(rep.bound));
    if (rep.lci_all != rep.gorenstein_all)
        rep.violations.push_back("lci and Gorenstein flags disagree");
    if (rep.lci_all && rep.degree_exact != rep.bound)
        rep.violations.push_back("locally complete intersection base locus without equality");
    if (!rep.lci_all && rep.degree_exact == rep.bound)
        rep.violations.push_back("equality without locally complete intersection base locus");
    if (small_lengths && rep.degree_exact != rep.bound)
        rep.violations.push_back("all local lengths <= 2 but bound is not attained");
    for (const auto& s : rep.samples)
        if (s.hyperplane_length != dn)
            rep.violations.push_back("hyperplane pullback length " + std::to_string(s.hyperplane_length) +
                                     " differs from d^n = " + std::to_string(dn));
    return rep;
}

// Random homogeneous polynomial of degree d (all monomial coefficients drawn
// uniformly; may be zero).
inline Poly random_homogeneous(const RingPtr& ring, int d, Rng& rng) {
    Poly p(ring);
    const std::size_t nv = ring->nvars();
    std::vector<unsigned> idx(nv, 0);
    // enumerate exponent vectors of total degree d
    std::vector<Monomial> monos;
    Monomial scratch(nv);
    struct Rec {
        static void go(std::size_t var, unsigned left, Monomial& m, std::vector<Monomial>& out) {
            if (var + 1 == m.e.size()) {
                m.e[var] = left;
                out.push_back(m);
                m.e[var] = 0;
                return;
            }
            for (unsigned e = 0; e <= left; ++e) {
                m.e[var] = e;
                go(var + 1, left - e, m, out);
            }
            m.e[var] = 0;
        }
    };
    Rec::go(0, static_cast<unsigned>(d), scratch, monos);
    for (const auto& m : monos) p.add_term(m, ring->field.sample(rng));
    return p;
}

struct CensusRow {
    long long delta = 0, bound = 0, degree = 0;
    bool lci = false, gorenstein = false, equality = false;
    bool bezout = false;  // every sampled E_P had length exactly d^n
    std::vector<std::string> violations;
};

struct CensusResult {
    std::vector<CensusRow> rows;
    long long skipped_base_locus = 0;  // PositiveDimensionalBaseLocus draws
    long long skipped_fiber = 0;       // PositiveDimensionalFiber draws
};

// Census of `count` random degree-d self-maps of P^n; draws whose undefined
// set is not finite, or whose sampled fibers are positive-dimensional, are
// skipped and counted. Row i uses the derived seed (seed, i), so results do
// not depend on scheduling.
inline CensusResult census(int n, int d, const Field& field, int count, std::uint64_t seed,
                           int trials = 5, unsigned max_ext = 4, unsigned threads = 0) {
    if (count < 1) throw Error(Errc::arity_mismatch, "census needs count >= 1");
    std::vector<std::string> vars;
    for (int i = 0; i <= n; ++i) vars.push_back("X" + std::to_string(i));
    RingPtr ring = make_ring(field, vars);

    CensusResult result;
    result.rows.resize(static_cast<std::size_t>(count));
    std::atomic<long long> skipped_base{0}, skipped_fiber{0};
    std::vector<std::string> row_errors(static_cast<std::size_t>(count));

    auto run_row = [&](int row) {
        Rng rng = derive_rng(seed, static_cast<std::uint64_t>(row));
        for (int draw = 0;; ++draw) {
            if (draw > 10000) {
                row_errors[static_cast<std::size_t>(row)] = "census row could not find a valid draw";
                return;
            }
            std::vector<Poly> comps;
            for (int i = 0; i <= n; ++i) comps.push_back(random_homogeneous(ring, d, rng));
            try {
                RationalMap f = make_rational_map(comps);
                DegreeReport rep = analyze(f, trials, rng.next(), max_ext);
                CensusRow r;
                r.delta = rep.delta;
                r.bound = rep.bound;
                r.degree = rep.degree_exact;
                r.lci = rep.lci_all;
                r.gorenstein = rep.gorenstein_all;
                r.equality = (rep.degree_exact == rep.bound);
                r.bezout = true;
                const long long dn = int_pow(f.d, f.n);
                for (const auto& s : rep.samples)
                    if (s.hyperplane_length != dn) r.bezout = false;
                r.violations = rep.violations;
                result.rows[static_cast<std::size_t>(row)] = std::move(r);
                return;
            } catch (const Error& e) {
                if (e.code() == Errc::positive_dimensional_base_locus) {
                    skipped_base.fetch_add(1);
                    continue;
                }
                if (e.code() == Errc::positive_dimensional_fiber ||
                    e.code() == Errc::positive_dimensional) {
                    skipped_fiber.fetch_add(1);
                    continue;
                }
                if (e.code() == Errc::arity_mismatch || e.code() == Errc::mixed_degrees) {
                    continue;  // degenerate draw (zero components)
                }
                row_errors[static_cast<std::size_t>(row)] = e.what();
                return;
            }
        }
    };

    unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
    if (nthreads < 1) nthreads = 1;
    nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(count));
    if (nthreads <= 1) {
        for (int i = 0; i < count; ++i) run_row(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    int i = next.fetch_add(1);
                    if (i >= count) return;
                    run_row(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    for (const auto& err : row_errors)
        if (!err.empty()) throw Error(Errc::internal, "census row failed: " + err);
    result.skipped_base_locus = skipped_base.load();
    result.skipped_fiber = skipped_fiber.load();
    return result;
}

// Exhaustive preimage count of a target over the map's own field: enumerate
// P^n(F) by normalized representatives and compare images projectively.
inline long long preimage_count_bruteforce(const RationalMap& f, const std::vector<FieldElement>& target) {
    const Field& F = f.ring->field;
    const std::size_t nv = f.ring->nvars();
    auto proportional = [&](const std::vector<FieldElement>& a, const std::vector<FieldElement>& b) {
        // a ~ b as projective points (both assumed nonzero)
        for (std::size_t i = 0; i < nv; ++i)
            for (std::size_t j = i + 1; j < nv; ++j)
                if (!(a[i] * b[j] == a[j] * b[i])) return false;
        return true;
    };
    std::vector<FieldElement> elems = F.enumerate();
    long long count = 0;
    // representatives: first nonzero coordinate equals 1
    for (std::size_t lead = 0; lead < nv; ++lead) {
        std::size_t free_vars = nv - lead - 1;
        std::vector<std::size_t> idx(free_vars, 0);
        for (;;) {
            std::vector<FieldElement> Q;
            for (std::size_t i = 0; i < lead; ++i) Q.push_back(F.zero());
            Q.push_back(F.one());
            for (std::size_t i = 0; i < free_vars; ++i) Q.push_back(elems[idx[i]]);
            std::vector<FieldElement> img;
            bool defined = false;
            for (const auto& c : f.components) {
                img.push_back(c.evaluate(Q));
                defined = defined || !img.back().is_zero();
            }
            if (defined && proportional(img, target)) ++count;
            if (free_vars == 0) break;
            std::size_t j = 0;
            while (j < free_vars) {
                if (++idx[j] < elems.size()) break;
                idx[j] = 0;
                ++j;
            }
            if (j == free_vars) break;
        }
    }
    return count;
}

}  // namespace ratdeg
