#include <catch2/catch_amalgamated.hpp>

#include "smallgen/modpoly.hpp"
#include "testutil.hpp"

using namespace smallgen;

TEST_CASE("factor_mod_p worked examples") {
    // x^2 - 2 mod 7 = (x - 3)(x - 4): 3^2 = 9 = 2 (mod 7)
    auto f1 = factor_mod_p(IntPoly{-2, 0, 1}, 7);
    REQUIRE(f1.factors.size() == 2);
    CHECK(f1.factors[0].poly.degree() == 1);
    CHECK(f1.factors[1].poly.degree() == 1);
    CHECK(mp_product(f1) == mp_reduce(IntPoly{-2, 0, 1}, 7));

    // x^2 - 2 irreducible mod 5: quadratic residues mod 5 are {1, 4}
    auto f2 = factor_mod_p(IntPoly{-2, 0, 1}, 5);
    REQUIRE(f2.factors.size() == 1);
    CHECK(f2.factors[0].poly.degree() == 2);
    CHECK(f2.factors[0].mult == 1);

    // x^2 + 1 = (x + 1)^2 mod 2
    auto f3 = factor_mod_p(IntPoly{1, 0, 1}, 2);
    REQUIRE(f3.factors.size() == 1);
    CHECK(f3.factors[0].poly.degree() == 1);
    CHECK(f3.factors[0].mult == 2);

    CHECK_THROWS_AS(factor_mod_p(IntPoly{1, 1}, 6), std::invalid_argument);
    CHECK_THROWS_AS(factor_mod_p(IntPoly{7, 7}, 7), std::invalid_argument);
}

TEST_CASE("factor_mod_p remultiplies: 1000 random cases") {
    const u64 primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                          53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    int done = 0;
    while (done < 1000) {
        u64 p = primes[testutil::rng() % 25];
        IntPoly f = testutil::random_poly(testutil::rand_int(1, 8), 50);
        ModPoly fp = mp_reduce(f, p);
        if (fp.is_zero()) continue;
        auto fac = factor_mod_p(f, p);
        REQUIRE(mp_product(fac) == fp);
        for (const auto& g : fac.factors) {
            REQUIRE(g.poly.lead() == 1);
            REQUIRE(g.poly.degree() >= 1);
        }
        ++done;
    }
}

TEST_CASE("factor_mod_p is deterministic") {
    IntPoly f{3, 1, 4, 1, 5, 9, 2, 6, 1};
    auto a = factor_mod_p(f, 31);
    auto b = factor_mod_p(f, 31);
    REQUIRE(a.factors.size() == b.factors.size());
    for (size_t i = 0; i < a.factors.size(); ++i) {
        CHECK(a.factors[i].poly == b.factors[i].poly);
        CHECK(a.factors[i].mult == b.factors[i].mult);
    }
    CHECK(a.seed == kFactorSeed);
}

TEST_CASE("p-th power multiplicities survive") {
    // (x + 1)^4 mod 2: derivative vanishes, recursion through x^2-powers
    IntPoly f = IntPoly{1, 1} * IntPoly{1, 1} * IntPoly{1, 1} * IntPoly{1, 1};
    auto fac = factor_mod_p(f, 2);
    REQUIRE(fac.factors.size() == 1);
    CHECK(fac.factors[0].mult == 4);
    CHECK(mp_product(fac) == mp_reduce(f, 2));
}

TEST_CASE("powmod and gcd over F_p") {
    u64 p = 13;
    ModPoly g = mp_reduce(IntPoly{-2, 0, 1}, p);
    // x^13 mod (g, 13) equals x iff x^2 - 2 splits mod 13 (it does: 6^2 = 36 = 10? no)
    // 2 is a QR mod 13? squares: 1,4,9,3,12,10 -> 2 is not; so x^p != x mod g
    ModPoly xp = mp_powmod(mp_x(), mpz_class(13), g, p);
    CHECK(!(xp == mp_mod(mp_x(), g, p)));
    u64 p2 = 7;
    ModPoly g2 = mp_reduce(IntPoly{-2, 0, 1}, p2);
    ModPoly xp2 = mp_powmod(mp_x(), mpz_class(7), g2, p2);
    CHECK(xp2 == mp_mod(mp_x(), g2, p2));
}
