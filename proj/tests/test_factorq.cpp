#include <catch2/catch_amalgamated.hpp>

#include "smallgen/factorq.hpp"
#include "testutil.hpp"

using namespace smallgen;

TEST_CASE("factor_over_q worked examples") {
    // difference of squares
    auto f1 = factor_over_q(IntPoly{-4, 0, 0, 0, 1});
    REQUIRE(f1.factors.size() == 2);
    CHECK(f1.factors[0].first == IntPoly{-2, 0, 1});
    CHECK(f1.factors[1].first == IntPoly{2, 0, 1});

    // x^4 + 1: reducible mod every prime yet irreducible over Q
    auto f2 = factor_over_q(IntPoly{1, 0, 0, 0, 1});
    REQUIRE(f2.factors.size() == 1);
    CHECK(f2.factors[0].first == IntPoly{1, 0, 0, 0, 1});
    CHECK(f2.factors[0].second == 1);

    // rational roots 1/2 and 1/3
    auto f3 = factor_over_q(IntPoly{1, -5, 6});
    REQUIRE(f3.factors.size() == 2);
    CHECK(f3.factors[0].first == IntPoly{-1, 2});
    CHECK(f3.factors[1].first == IntPoly{-1, 3});

    CHECK_THROWS_AS(factor_over_q(IntPoly{}), std::invalid_argument);
}

TEST_CASE("content and multiplicities") {
    IntPoly f = (IntPoly{-2, 0, 1} * IntPoly{-2, 0, 1}) * IntPoly{-1, 1} * mpz_class(-6);
    auto fac = factor_over_q(f);
    CHECK(fac.content == -6);
    REQUIRE(fac.factors.size() == 2);
    CHECK(fac.product() == f);
}

TEST_CASE("Hensel path: products of quadratic irreducibles") {
    IntPoly f = IntPoly{-2, 0, 1} * IntPoly{-3, 0, 1};  // x^4 - 5x^2 + 6
    auto fac = factor_over_q(f);
    REQUIRE(fac.factors.size() == 2);
    CHECK(fac.product() == f);

    // Swinnerton-Dyer style: minpoly of sqrt2 + sqrt3 stays irreducible
    auto g = factor_over_q(IntPoly{1, 0, -10, 0, 1});
    REQUIRE(g.factors.size() == 1);
    CHECK(g.factors[0].first.degree() == 4);
}

TEST_CASE("non-monic factorizations map back correctly") {
    IntPoly f = IntPoly{-1, 3} * IntPoly{2, 0, 5};  // (3x - 1)(5x^2 + 2)
    auto fac = factor_over_q(f);
    REQUIRE(fac.factors.size() == 2);
    CHECK(fac.product() == f);
    auto big = factor_over_q(IntPoly{-5, 0, 7} * IntPoly{-2, 0, 0, 0, 3});
    CHECK(big.factors.size() == 2);
}

TEST_CASE("random re-factorization audit") {
    int done = 0;
    while (done < 25) {
        IntPoly f = testutil::random_poly(testutil::rand_int(1, 3), 6);
        IntPoly g = testutil::random_poly(testutil::rand_int(1, 3), 6);
        if (f.is_zero() || g.is_zero()) continue;
        IntPoly prod = f * g;
        if (prod.degree() < 2) continue;
        auto fac = factor_over_q(prod);
        REQUIRE(fac.product() == prod);
        // audit: every reported factor is itself irreducible
        for (auto& [h, m] : fac.factors) {
            (void)m;
            auto sub = factor_over_q(h);
            REQUIRE(sub.factors.size() == 1);
            REQUIRE(sub.factors[0].second == 1);
            REQUIRE(sub.factors[0].first == h);
        }
        ++done;
    }
}

TEST_CASE("degree-46 cyclotomic certificate") {
    // phi_47 is irreducible; the good-prime path should certify it quickly
    IntPoly phi47 = cyclotomic(47);
    REQUIRE(phi47.degree() == 46);
    CHECK(is_irreducible_q(phi47));
}
