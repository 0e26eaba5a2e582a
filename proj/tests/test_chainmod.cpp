#include <catch2/catch_amalgamated.hpp>

#include "ratdeg/chainmod.hpp"

using namespace ratdeg;

namespace {

// Brute-force kernel of phi: R^r -> R^s/(eps^e relations on the first l
// coordinates), by exhaustive enumeration of R^r.
std::vector<std::vector<ChainElem>> kernel_by_enumeration(const ChainRing& R, unsigned r, unsigned s,
                                                          unsigned l, unsigned e, const CMat& phi) {
    std::vector<ChainElem> elems = R.enumerate();
    std::vector<std::vector<ChainElem>> kernel;
    std::vector<std::size_t> idx(r, 0);
    for (;;) {
        std::vector<ChainElem> x;
        for (unsigned i = 0; i < r; ++i) x.push_back(elems[idx[i]]);
        std::vector<ChainElem> y = cmat_apply(R, phi, x);
        bool in_kernel = true;
        for (unsigned i = 0; i < s && in_kernel; ++i) {
            if (i < l) {
                // coordinate lives in R/(eps^e): membership in (eps^e)
                if (R.val(y[i]) < e) in_kernel = false;
            } else {
                if (!R.is_zero(y[i])) in_kernel = false;
            }
        }
        if (in_kernel) kernel.push_back(std::move(x));
        unsigned j = 0;
        while (j < r) {
            if (++idx[j] < elems.size()) break;
            idx[j] = 0;
            ++j;
        }
        if (j == r) break;
    }
    return kernel;
}

// Minimal generator count of a finite module set K ⊆ R^r: dim_{F_q} K / eps K.
unsigned min_generators_of_set(const ChainRing& R, const std::vector<std::vector<ChainElem>>& K) {
    auto q = R.base().cardinality().value();
    // eps K as a set
    std::vector<std::vector<ChainElem>> epsK;
    for (const auto& x : K) {
        std::vector<ChainElem> y;
        for (const auto& v : x) y.push_back(R.mul_eps_power(v, 1));
        epsK.push_back(std::move(y));
    }
    std::sort(epsK.begin(), epsK.end(), [&](const auto& a, const auto& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < a[i].c.size(); ++j) {
                if (a[i].c[j].coeffs() != b[i].c[j].coeffs())
                    return a[i].c[j].coeffs() < b[i].c[j].coeffs();
            }
        }
        return false;
    });
    epsK.erase(std::unique(epsK.begin(), epsK.end()), epsK.end());
    // |K| and |eps K| are powers of q; the quotient dimension is the log ratio
    unsigned dim = 0;
    std::size_t ratio = K.size() / epsK.size();
    while (ratio > 1) {
        ratio /= q;
        ++dim;
    }
    return dim;
}

}  // namespace

TEST_CASE("chain ring arithmetic") {
    ChainRing R(Field::prime(3), 2);
    ChainElem eps = R.eps_power(1);
    REQUIRE(R.is_zero(R.mul(eps, eps)));
    REQUIRE(R.val(eps) == 1);
    REQUIRE_FALSE(R.is_unit(eps));
    ChainElem u = R.add(R.one(), eps);  // 1 + eps
    REQUIRE(R.is_unit(u));
    REQUIRE(R.is_zero(R.sub(R.mul(u, R.inv(u)), R.one())));
    REQUIRE_THROWS_MATCHES(R.inv(eps), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                               return e.code() == Errc::division_by_zero;
                           }));
    // every nonzero element is a unit times a power of eps
    for (const auto& a : R.enumerate()) {
        if (R.is_zero(a)) continue;
        unsigned v = R.val(a);
        ChainElem q = R.div_exact(a, R.eps_power(v));
        REQUIRE(R.is_unit(q));
        REQUIRE(a == R.mul(q, R.eps_power(v)));
    }
}

TEST_CASE("smith form") {
    SECTION("a diagonal matrix is fixed") {
        ChainRing R(Field::prime(3), 2);
        CMat A(R, 2, 2);
        A.at(0, 0) = R.one();
        A.at(1, 1) = R.eps_power(1);
        SmithReport s = smith_form(R, A);
        REQUIRE(s.diag_val == std::vector<unsigned>{0, 1});
    }
    SECTION("column reduction collapses dependent columns") {
        ChainRing R(Field::prime(3), 2);
        CMat A(R, 2, 2);
        A.at(0, 0) = R.eps_power(1);
        A.at(0, 1) = R.eps_power(1);
        SmithReport s = smith_form(R, A);
        REQUIRE(s.diag_val == std::vector<unsigned>{1, 2});  // diag(eps, 0)
    }
    SECTION("random matrices: U*A*V = D is checked internally") {
        for (auto [q, m] : {std::pair<std::uint64_t, unsigned>{2, 2}, {3, 2}, {3, 3}}) {
            ChainRing R(Field::prime(q), m);
            Rng rng(q * 31 + m);
            for (int trial = 0; trial < 200; ++trial) {
                std::size_t rows = 1 + rng.below(3), cols = 1 + rng.below(3);
                CMat A(R, rows, cols);
                for (auto& x : A.a) x = R.sample(rng);
                SmithReport s = smith_form(R, A);  // throws on any postcondition failure
                // valuations ascend
                for (std::size_t i = 1; i < s.diag_val.size(); ++i)
                    REQUIRE(s.diag_val[i - 1] <= s.diag_val[i]);
                // off-diagonal zero
                for (std::size_t i = 0; i < s.D.rows; ++i)
                    for (std::size_t j = 0; j < s.D.cols; ++j)
                        if (i != j) REQUIRE(R.is_zero(s.D.at(i, j)));
            }
        }
    }
}

TEST_CASE("NR-free rank") {
    ChainRing R(Field::prime(3), 2);
    SECTION("a free module of rank 2") {
        PresentedModule M(R, 2, CMat(R, 2, 0));
        NrFreeRank nr = nr_free_rank(M);
        REQUIRE(nr.rank == 2);
        for (unsigned v : nr.witness_relation_vals) REQUIRE(v == R.order());  // no relations
    }
    SECTION("R + R/(eps) has rank 2 with one nilpotent relation") {
        CMat rel(R, 2, 1);
        rel.at(1, 0) = R.eps_power(1);
        PresentedModule M(R, 2, rel);
        NrFreeRank nr = nr_free_rank(M);
        REQUIRE(nr.rank == 2);
        REQUIRE(nr.witness_relation_vals == std::vector<unsigned>{1, 2});
    }
    SECTION("the zero module R/(1)") {
        CMat rel(R, 1, 1);
        rel.at(0, 0) = R.one();
        PresentedModule M(R, 1, rel);
        REQUIRE(nr_free_rank(M).rank == 0);
    }
}

TEST_CASE("kernel of a surjection: the worked instances") {
    SECTION("r=2, s=1, l=1, e=1 over F_3[eps]/(eps^2): rank 2") {
        ChainRing R(Field::prime(3), 2);
        CMat phi(R, 1, 2);
        phi.at(0, 0) = R.one();  // phi(a, b) = a
        KernelResult k = kernel_of_surjection(R, 2, 1, 1, 1, phi);
        REQUIRE(k.predicted_rank == 2);
        REQUIRE(k.computed_rank == 2);
        // exhaustive enumeration over all 81 elements of R^2
        auto brute = kernel_by_enumeration(R, 2, 1, 1, 1, phi);
        REQUIRE(min_generators_of_set(R, brute) == 2);
        // the computed generators span the brute-force kernel set
        CMat G(R, 2, k.generators.size());
        for (std::size_t j = 0; j < k.generators.size(); ++j)
            for (std::size_t i = 0; i < 2; ++i) G.at(i, j) = k.generators[j][i];
        for (const auto& x : brute) {
            REQUIRE(solve_linear(R, G, x).has_value());
        }
    }
    SECTION("l=0 free case: rank 1 and free") {
        ChainRing R(Field::prime(3), 2);
        CMat phi(R, 1, 2);
        phi.at(0, 0) = R.one();
        KernelResult k = kernel_of_surjection(R, 2, 1, 0, 1, phi);
        REQUIRE(k.computed_rank == 1);
        REQUIRE(k.is_free);
    }
    SECTION("r=3, s=2, l=2 over F_2[eps]/(eps^2): rank 3 by enumeration") {
        ChainRing R(Field::prime(2), 2);
        CMat phi(R, 2, 3);
        phi.at(0, 0) = R.one();
        phi.at(1, 1) = R.one();  // projection to the first two coordinates
        KernelResult k = kernel_of_surjection(R, 3, 2, 2, 1, phi);
        REQUIRE(k.predicted_rank == 3);
        REQUIRE(k.computed_rank == 3);
        auto brute = kernel_by_enumeration(R, 3, 2, 2, 1, phi);
        REQUIRE(min_generators_of_set(R, brute) == 3);
        CMat G(R, 3, k.generators.size());
        for (std::size_t j = 0; j < k.generators.size(); ++j)
            for (std::size_t i = 0; i < 3; ++i) G.at(i, j) = k.generators[j][i];
        for (const auto& x : brute) REQUIRE(solve_linear(R, G, x).has_value());
    }
    SECTION("non-surjective maps are rejected") {
        ChainRing R(Field::prime(3), 2);
        CMat phi(R, 1, 2);
        phi.at(0, 0) = R.eps_power(1);
        REQUIRE_THROWS_MATCHES(kernel_of_surjection(R, 2, 1, 0, 1, phi), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == Errc::not_surjective;
                               }));
    }
}

TEST_CASE("rank formula on seeded random surjections") {
    for (auto [q, m] : {std::pair<std::uint64_t, unsigned>{2, 2}, {3, 2}, {3, 3}}) {
        ChainRing R(Field::prime(q), m);
        Rng rng(1000 * q + m);
        for (int trial = 0; trial < 50; ++trial) {
            unsigned r = 1 + static_cast<unsigned>(rng.below(4));
            unsigned s = 1 + static_cast<unsigned>(rng.below(r));
            unsigned l = static_cast<unsigned>(rng.below(s + 1));
            unsigned e = 1 + static_cast<unsigned>(rng.below(m - 1));
            CMat phi(R, s, r);
            for (;;) {
                for (auto& x : phi.a) x = R.sample(rng);
                if (cmat_reduce(R, phi).rank() == s) break;
            }
            // kernel_of_surjection throws VerificationFailed on any mismatch
            KernelResult k = kernel_of_surjection(R, r, s, l, e, phi);
            REQUIRE(k.computed_rank == r - s + l);
            if (l == 0) REQUIRE(k.is_free);
            // enumeration oracle in the small configurations
            if (r <= 2 && R.base().cardinality().value() <= 9) {
                auto brute = kernel_by_enumeration(R, r, s, l, e, phi);
                REQUIRE(min_generators_of_set(R, brute) == k.computed_rank);
            }
        }
    }
}

TEST_CASE("order of operations: kernel-then-reduce vs reduce-then-kernel") {
    ChainRing R(Field::prime(3), 2);
    SECTION("the l=1 instance gives (2, 1)") {
        CMat phi(R, 1, 2);
        phi.at(0, 0) = R.one();
        auto [kernel_first, reduce_first] = remark_order_of_operations(R, 2, 1, 1, 1, phi);
        REQUIRE(kernel_first == 2);
        REQUIRE(reduce_first == 1);
    }
    SECTION("an l=0 instance shows no discrepancy") {
        CMat phi(R, 1, 2);
        phi.at(0, 0) = R.one();
        auto [kernel_first, reduce_first] = remark_order_of_operations(R, 2, 1, 0, 1, phi);
        REQUIRE(kernel_first == 1);
        REQUIRE(reduce_first == 1);
    }
    SECTION("the (3, 2, 2) instance gives (3, 1)") {
        ChainRing R2(Field::prime(2), 2);
        CMat phi(R2, 2, 3);
        phi.at(0, 0) = R2.one();
        phi.at(1, 1) = R2.one();
        auto [kernel_first, reduce_first] = remark_order_of_operations(R2, 3, 2, 2, 1, phi);
        REQUIRE(kernel_first == 3);
        REQUIRE(reduce_first == 1);
    }
}

TEST_CASE("transition matrices between generating sets") {
    ChainRing R(Field::prime(3), 2);
    SECTION("an explicit unipotent change of basis of R^2") {
        PresentedModule M(R, 2, CMat(R, 2, 0));
        std::vector<std::vector<ChainElem>> std_basis = {{R.one(), R.zero()}, {R.zero(), R.one()}};
        std::vector<std::vector<ChainElem>> gens2 = {{R.one(), R.eps_power(1)}, {R.zero(), R.one()}};
        TransitionResult t = transition_matrix(M, std_basis, gens2);
        // columns express gens2 in the standard basis: T = [[1, 0], [eps, 1]]
        REQUIRE(t.T.at(0, 0) == R.one());
        REQUIRE(t.T.at(1, 0) == R.eps_power(1));
        REQUIRE(t.T.at(0, 1) == R.zero());
        REQUIRE(t.T.at(1, 1) == R.one());
        // reduction is the identity
        REQUIRE(t.T_red.at(0, 0).is_one());
        REQUIRE(t.T_red.at(1, 1).is_one());
        REQUIRE(t.T_red.at(0, 1).is_zero());
        REQUIRE(t.T_red.at(1, 0).is_zero());
    }
    SECTION("a permutation of the generators yields a permutation matrix") {
        PresentedModule M(R, 2, CMat(R, 2, 0));
        std::vector<std::vector<ChainElem>> g1 = {{R.one(), R.zero()}, {R.zero(), R.one()}};
        std::vector<std::vector<ChainElem>> g2 = {{R.zero(), R.one()}, {R.one(), R.zero()}};
        TransitionResult t = transition_matrix(M, g1, g2);
        REQUIRE(t.T.at(0, 0) == R.zero());
        REQUIRE(t.T.at(1, 0) == R.one());
        REQUIRE(t.T.at(0, 1) == R.one());
        REQUIRE(t.T.at(1, 1) == R.zero());
    }
    SECTION("a mixed-torsion module: postcondition self-verifies") {
        CMat rel(R, 2, 1);
        rel.at(1, 0) = R.eps_power(1);  // M = R + R/(eps)
        PresentedModule M(R, 2, rel);
        std::vector<std::vector<ChainElem>> g1 = {{R.one(), R.zero()}, {R.zero(), R.one()}};
        std::vector<std::vector<ChainElem>> g2 = {
            {R.one(), R.eps_power(1)},  // m1 + eps*m2 (eps*m2 = 0 in M, still a generator)
            {R.eps_power(1), R.one()}};
        TransitionResult t = transition_matrix(M, g1, g2);  // throws if not exact
        REQUIRE(cmat_reduce(R, t.T).rank() == 2);
    }
    SECTION("non-generating lists are rejected") {
        PresentedModule M(R, 2, CMat(R, 2, 0));
        std::vector<std::vector<ChainElem>> g1 = {{R.one(), R.zero()}, {R.zero(), R.one()}};
        std::vector<std::vector<ChainElem>> bad = {{R.one(), R.zero()}, {R.eps_power(1), R.zero()}};
        REQUIRE_THROWS_MATCHES(transition_matrix(M, g1, bad), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == Errc::not_generating;
                               }));
    }
}

TEST_CASE("transition matrices verify on random generating sets") {
    ChainRing R(Field::prime(3), 3);
    Rng rng(404);
    PresentedModule M(R, 2, CMat(R, 2, 0));  // free of rank 2
    for (int trial = 0; trial < 25; ++trial) {
        // random invertible 2x2 over R applied to the standard basis
        CMat A(R, 2, 2);
        for (;;) {
            for (auto& x : A.a) x = R.sample(rng);
            if (cmat_reduce(R, A).rank() == 2) break;
        }
        std::vector<std::vector<ChainElem>> g1 = {{R.one(), R.zero()}, {R.zero(), R.one()}};
        std::vector<std::vector<ChainElem>> g2 = {{A.at(0, 0), A.at(1, 0)}, {A.at(0, 1), A.at(1, 1)}};
        TransitionResult t = transition_matrix(M, g1, g2);
        // in the free module the transition is unique and must equal A
        REQUIRE(t.T == A);
    }
}
