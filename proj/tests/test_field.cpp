#include <catch2/catch_amalgamated.hpp>

#include "ratdeg/field.hpp"
#include "ratdeg/rng.hpp"

using namespace ratdeg;

TEST_CASE("prime field construction rejects composites") {
    REQUIRE_NOTHROW(Field::prime(2));
    REQUIRE_NOTHROW(Field::prime(7));
    REQUIRE_THROWS_MATCHES(Field::prime(4), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                               return e.code() == Errc::not_prime;
                           }));
    REQUIRE_THROWS_AS(Field::prime(1), Error);
    REQUIRE_THROWS_AS(Field::extension(4, 1, 0), Error);
}

TEST_CASE("extension construction") {
    SECTION("degree 1 always works") {
        Field f = Field::extension(3, 1, 0);
        REQUIRE(f.ext_degree() == 1);
        REQUIRE(f.cardinality().value() == 3);
    }
    SECTION("F_9 has nine elements and an irreducible minimal polynomial") {
        Field f9 = Field::extension(3, 2, 1);
        REQUIRE(f9.cardinality().value() == 9);
        // independent oracle: the minimal polynomial has no root in F_3
        const auto& mp = f9.minimal_poly();
        REQUIRE(mp.size() == 3);
        for (std::uint64_t a = 0; a < 3; ++a) {
            std::uint64_t v = (mp[0] + mp[1] * a + mp[2] * a * a) % 3;
            REQUIRE(v != 0);
        }
    }
    SECTION("x^2+1 is a valid minimal polynomial for F_9: -1 has no square root mod 3") {
        for (std::uint64_t a = 0; a < 3; ++a) REQUIRE((a * a + 1) % 3 != 0);
        Field f9 = Field::extension_with_poly(3, {1, 0, 1});
        FieldElement x = f9.generator();
        REQUIRE(f9.mul(x, x) == f9.from_int(-1));
    }
    SECTION("degree cap") {
        REQUIRE_THROWS_MATCHES(Field::extension(3, 13, 0), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == Errc::degree_too_large;
                               }));
    }
    SECTION("seeded construction replays deterministically") {
        Field a = Field::extension(5, 3, 77);
        Field b = Field::extension(5, 3, 77);
        REQUIRE(a.minimal_poly() == b.minimal_poly());
    }
}

TEST_CASE("inverses") {
    Field f5 = Field::prime(5);
    REQUIRE(f5.inv(f5.from_int(2)) == f5.from_int(3));
    REQUIRE(f5.inv(f5.one()) == f5.one());
    REQUIRE_THROWS_MATCHES(f5.inv(f5.zero()), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                               return e.code() == Errc::division_by_zero;
                           }));

    // x * (-x) = -x^2 = 1 in F_3[x]/(x^2+1), verified by multiplication
    Field f9 = Field::extension_with_poly(3, {1, 0, 1});
    FieldElement x = f9.generator();
    FieldElement inv = f9.inv(x);
    REQUIRE(inv == f9.neg(x));
    REQUIRE(f9.mul(x, inv) == f9.one());
}

TEST_CASE("enumerate") {
    SECTION("F_2 in order") {
        Field f2 = Field::prime(2);
        auto e = f2.enumerate();
        REQUIRE(e.size() == 2);
        REQUIRE(e[0] == f2.zero());
        REQUIRE(e[1] == f2.one());
    }
    SECTION("F_9 has nine distinct elements") {
        Field f9 = Field::extension(3, 2, 0);
        auto e = f9.enumerate();
        REQUIRE(e.size() == 9);
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = i + 1; j < e.size(); ++j) REQUIRE(e[i] != e[j]);
    }
    SECTION("cap at 10^6") {
        Field big = Field::extension(2, 12, 0);  // 4096 elements, fine
        REQUIRE(big.enumerate().size() == 4096);
        Field f = Field::prime(1000003);
        REQUIRE_THROWS_MATCHES(f.enumerate(), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == Errc::field_too_large;
                               }));
    }
}

TEST_CASE("field axioms on random triples") {
    for (const Field& F : {Field::prime(7), Field::extension_with_poly(3, {1, 0, 1}),
                           Field::extension(2, 4, 3)}) {
        Rng rng(2024);
        for (int i = 0; i < 1000; ++i) {
            FieldElement a = F.sample(rng), b = F.sample(rng), c = F.sample(rng);
            REQUIRE(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
            REQUIRE(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
            REQUIRE(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            REQUIRE(F.add(a, F.neg(a)) == F.zero());
            if (!a.is_zero()) REQUIRE(F.mul(a, F.inv(a)) == F.one());
        }
    }
}

TEST_CASE("Frobenius is additive") {
    for (const Field& F : {Field::prime(5), Field::extension(3, 2, 9), Field::extension(2, 3, 4)}) {
        const std::uint64_t p = F.characteristic();
        Rng rng(7);
        for (int i = 0; i < 200; ++i) {
            FieldElement a = F.sample(rng), b = F.sample(rng);
            REQUIRE(F.pow(F.add(a, b), p) == F.add(F.pow(a, p), F.pow(b, p)));
        }
    }
}

TEST_CASE("embedding is a field homomorphism") {
    Field f5 = Field::prime(5);
    Field f25 = Field::extension(5, 2, 0);
    FieldEmbedding emb(f5, f25);
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        FieldElement a = f5.sample(rng), b = f5.sample(rng);
        REQUIRE(emb(f5.add(a, b)) == f25.add(emb(a), emb(b)));
        REQUIRE(emb(f5.mul(a, b)) == f25.mul(emb(a), emb(b)));
    }
    REQUIRE(emb(f5.one()) == f25.one());

    // tower embedding F_9 -> F_81
    Field f9 = Field::extension(3, 2, 1);
    Field f81 = Field::extension(3, 4, 1);
    FieldEmbedding emb2(f9, f81);
    for (int i = 0; i < 100; ++i) {
        FieldElement a = f9.sample(rng), b = f9.sample(rng);
        REQUIRE(emb2(f9.mul(a, b)) == f81.mul(emb2(a), emb2(b)));
        REQUIRE(emb2(f9.add(a, b)) == f81.add(emb2(a), emb2(b)));
    }
}

TEST_CASE("cross-field operations are rejected") {
    Field f5 = Field::prime(5), f7 = Field::prime(7);
    REQUIRE_THROWS_MATCHES(f5.add(f5.one(), f7.one()), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                               return e.code() == Errc::ring_mismatch;
                           }));
}
