#include <catch2/catch_amalgamated.hpp>

#include "ratdeg/parse.hpp"
#include "ratdeg/poly.hpp"
#include "ratdeg/rng.hpp"

using namespace ratdeg;

namespace {

Poly random_poly(const RingPtr& ring, Rng& rng, int max_deg, int terms) {
    Poly p(ring);
    for (int t = 0; t < terms; ++t) {
        Monomial m(ring->nvars());
        for (auto& e : m.e) e = static_cast<unsigned>(rng.below(static_cast<std::uint64_t>(max_deg + 1)));
        p.add_term(m, ring->field.sample(rng));
    }
    return p;
}

}  // namespace

TEST_CASE("arithmetic basics") {
    Field f5 = Field::prime(5);
    RingPtr r = make_ring(f5, {"X", "Y"});
    Poly X = Poly::variable(r, 0), Y = Poly::variable(r, 1);

    SECTION("(X+Y)(X-Y) = X^2 - Y^2 over F_5") {
        REQUIRE((X + Y) * (X - Y) == X * X - Y * Y);
    }
    SECTION("freshman's dream in characteristic 2") {
        Field f2 = Field::prime(2);
        RingPtr r2 = make_ring(f2, {"X", "Y"});
        Poly A = Poly::variable(r2, 0), B = Poly::variable(r2, 1);
        REQUIRE((A + B).pow(2) == A * A + B * B);
    }
    SECTION("multiplication by zero clears the term map") {
        Poly z = X * Poly::zero(r);
        REQUIRE(z.is_zero());
        REQUIRE(z.num_terms() == 0);
    }
    SECTION("ring mismatch is typed") {
        RingPtr other = make_ring(f5, {"A", "B"});
        REQUIRE_THROWS_MATCHES(X + Poly::variable(other, 0), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == Errc::ring_mismatch;
                               }));
    }
}

TEST_CASE("homogeneity") {
    Field f7 = Field::prime(7);
    RingPtr r = make_ring(f7, {"X", "Y", "Z"});
    Poly X = Poly::variable(r, 0), Y = Poly::variable(r, 1), Z = Poly::variable(r, 2);

    auto h1 = (X * Y * Z).homogeneity();
    REQUIRE(h1.homogeneous);
    REQUIRE(h1.degree == 3);

    auto h2 = (X.pow(3) + Y).homogeneity();
    REQUIRE_FALSE(h2.homogeneous);

    auto h3 = (X.pow(3) + Y.pow(3)).homogeneity();
    REQUIRE(h3.homogeneous);
    REQUIRE(h3.degree == 3);

    auto hz = Poly::zero(r).homogeneity();
    REQUIRE(hz.is_zero_poly);
    REQUIRE(hz.homogeneous);
}

TEST_CASE("evaluation") {
    Field f7 = Field::prime(7);
    RingPtr r = make_ring(f7, {"X", "Y", "Z"});
    Poly XYZ = Poly::variable(r, 0) * Poly::variable(r, 1) * Poly::variable(r, 2);
    REQUIRE(XYZ.evaluate({f7.zero(), f7.zero(), f7.one()}) == f7.zero());

    RingPtr r1 = make_ring(f7, {"X"});
    Poly X3 = Poly::variable(r1, 0).pow(3);
    REQUIRE(X3.evaluate({f7.from_int(2)}) == f7.one());  // 8 = 1 mod 7

    Field f3 = Field::prime(3);
    RingPtr r3 = make_ring(f3, {"X", "Y"});
    Poly s = Poly::variable(r3, 0).pow(3) + Poly::variable(r3, 1).pow(3);
    REQUIRE(s.evaluate({f3.one(), f3.one()}) == f3.from_int(2));

    REQUIRE_THROWS_MATCHES(X3.evaluate({f7.one(), f7.one()}), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                               return e.code() == Errc::arity_mismatch;
                           }));
}

TEST_CASE("dehomogenize") {
    Field f7 = Field::prime(7);
    RingPtr r = make_ring(f7, {"X", "Y", "Z"});
    Poly X = Poly::variable(r, 0), Y = Poly::variable(r, 1), Z = Poly::variable(r, 2);

    SECTION("XYZ wrt Z becomes xy") {
        Poly d = (X * Y * Z).dehomogenize(2);
        REQUIRE(d.ring()->vars == std::vector<std::string>{"X", "Y"});
        REQUIRE(d == Poly::variable(d.ring(), 0) * Poly::variable(d.ring(), 1));
    }
    SECTION("X^3 wrt X becomes 1") {
        Poly d = X.pow(3).dehomogenize(0);
        REQUIRE(d == Poly::constant(d.ring(), 1));
    }
    SECTION("Y^3 wrt Z stays y^3") {
        Poly d = Y.pow(3).dehomogenize(2);
        REQUIRE(d == Poly::variable(d.ring(), 1).pow(3));
    }
    SECTION("non-homogeneous input is rejected") {
        REQUIRE_THROWS_MATCHES((X.pow(3) + Y).dehomogenize(2), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == Errc::not_homogeneous;
                               }));
    }
}

TEST_CASE("dehomogenize after homogenize is the identity") {
    Field f5 = Field::prime(5);
    RingPtr affine = make_ring(f5, {"x", "y"});
    RingPtr proj = make_ring(f5, {"x", "y", "w"});
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        Poly g = random_poly(affine, rng, 3, 4);
        unsigned d = static_cast<unsigned>(std::max(0, g.degree())) + rng.below(3);
        Poly h = g.homogenize(2, d, proj);
        auto hh = h.homogeneity();
        REQUIRE(hh.homogeneous);
        Poly back = h.dehomogenize(2);
        REQUIRE(back == g);
    }
}

TEST_CASE("ring axioms and evaluation homomorphism on random polynomials") {
    Field f7 = Field::prime(7);
    RingPtr r = make_ring(f7, {"x", "y", "z"});
    Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        Poly a = random_poly(r, rng, 2, 3), b = random_poly(r, rng, 2, 3), c = random_poly(r, rng, 2, 3);
        REQUIRE((a + b) * c == a * c + b * c);
        REQUIRE(a * b == b * a);
        REQUIRE((a * b) * c == a * (b * c));
        std::vector<FieldElement> pt = {f7.sample(rng), f7.sample(rng), f7.sample(rng)};
        REQUIRE((a * b).evaluate(pt) == f7.mul(a.evaluate(pt), b.evaluate(pt)));
        REQUIRE((a + b).evaluate(pt) == f7.add(a.evaluate(pt), b.evaluate(pt)));
    }
}

TEST_CASE("expression parser") {
    Field f7 = Field::prime(7);
    RingPtr r = make_ring(f7, {"X", "Y", "Z"});
    Poly X = Poly::variable(r, 0), Y = Poly::variable(r, 1);

    REQUIRE(parse_poly(r, "X^3 + Y^3") == X.pow(3) + Y.pow(3));
    REQUIRE(parse_poly(r, "-X") == -X);
    REQUIRE(parse_poly(r, "2*X - -Y") == Poly::constant(r, 2) * X + Y);
    REQUIRE(parse_poly(r, "(X + Y)^2") == (X + Y) * (X + Y));
    REQUIRE(parse_poly(r, "X^2*Y - 3") == X * X * Y - Poly::constant(r, 3));
    // ^ binds tighter than *, which binds tighter than +
    REQUIRE(parse_poly(r, "X*Y^2 + Z") ==
            X * Y.pow(2) + Poly::variable(r, 2));
    REQUIRE(parse_poly(r, "-X^2") == -(X * X));
    // 10 reduces mod 7
    REQUIRE(parse_poly(r, "10") == Poly::constant(r, 3));

    SECTION("juxtaposition is not multiplication") {
        REQUIRE_THROWS_MATCHES(parse_poly(r, "X Y"), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == Errc::parse_error;
                               }));
        REQUIRE_THROWS_AS(parse_poly(r, "2X"), Error);
    }
    SECTION("unknown identifiers carry positions") {
        try {
            parse_poly(r, "X + W", 3);
            FAIL("expected a parse error");
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::parse_error);
            REQUIRE(e.line() == 3);
            REQUIRE(e.column() == 5);
        }
    }
    SECTION("malformed expressions") {
        REQUIRE_THROWS_AS(parse_poly(r, "X +"), Error);
        REQUIRE_THROWS_AS(parse_poly(r, "(X"), Error);
        REQUIRE_THROWS_AS(parse_poly(r, "X ^ Y"), Error);
        REQUIRE_THROWS_AS(parse_poly(r, "$"), Error);
    }
}
