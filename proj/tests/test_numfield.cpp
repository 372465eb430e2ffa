#include <catch2/catch_amalgamated.hpp>

#include "smallgen/numfield.hpp"
#include "testutil.hpp"

using namespace smallgen;

TEST_CASE("field element arithmetic in Q(sqrt 2)") {
    auto K = NumberField::create(IntPoly{-2, 0, 1}, true);
    FieldElement one = element_from_mpq(K, 1);
    FieldElement theta = element_theta(K);
    // (1 + theta)(1 - theta) = 1 - 2 = -1
    FieldElement prod = (one + theta) * (one - theta);
    CHECK(prod.coords[0] == -1);
    CHECK(prod.coords[1] == 0);
    // theta^(-1) = theta / 2
    FieldElement inv = inverse(theta);
    CHECK(inv.coords[0] == 0);
    CHECK(inv.coords[1] == mpq_class(1, 2));
    CHECK_THROWS_AS(inverse(element_from_mpq(K, 0)), std::invalid_argument);
}

TEST_CASE("minimal polynomials of elements") {
    auto K = NumberField::create(IntPoly{-2, 0, 1}, true);
    FieldElement alpha = element_from_mpq(K, 1) + element_theta(K);
    CHECK(minimal_polynomial(alpha) == IntPoly{-1, -2, 1});  // (alpha-1)^2 = 2
    CHECK(minimal_polynomial(element_from_mpq(K, mpq_class(3, 2))) == IntPoly{-3, 2});
    auto L = NumberField::create(IntPoly{-2, 0, 0, 1}, true);
    CHECK(minimal_polynomial(element_theta(L)) == IntPoly{-2, 0, 0, 1});
    // the minimal polynomial annihilates the element
    FieldElement beta = element_theta(L) + element_from_mpq(L, 5);
    IntPoly mb = minimal_polynomial(beta);
    FieldElement val = element_from_mpq(L, 0);
    for (int i = mb.degree(); i >= 0; --i) val = val * beta + element_from_mpq(L, mpq_class(mb.coeff(i)));
    CHECK(val.is_zero());
    CHECK(is_generator(beta));
    CHECK(!is_generator(element_from_mpq(L, 7)));
}

TEST_CASE("root-in-field (Trager)") {
    auto K = NumberField::create(IntPoly{-2, 0, 1}, true);
    CHECK(has_root_in_field(IntPoly{-2, 0, 1}, K));
    CHECK(!has_root_in_field(IntPoly{-3, 0, 1}, K));
    CHECK(has_root_in_field(IntPoly{-1, -2, 1}, K));  // root 1 + sqrt2
    CHECK_THROWS_AS(has_root_in_field(IntPoly{-4, 0, 0, 0, 1}, K), std::invalid_argument);
    // the defining polynomial always has a root (property over a pool)
    for (const IntPoly& g : {IntPoly{-2, 0, 1}, IntPoly{1, -1, 1}, IntPoly{-2, 0, 0, 1},
                             IntPoly{1, 1, 1, 1, 1}}) {
        auto F = NumberField::create(g, true);
        CHECK(has_root_in_field(g, F));
    }
}

TEST_CASE("field isomorphism tests") {
    CHECK(fields_isomorphic(IntPoly{-2, 0, 1}, IntPoly{-8, 0, 1}));   // sqrt 8 = 2 sqrt 2
    CHECK(!fields_isomorphic(IntPoly{-2, 0, 1}, IntPoly{-3, 0, 1}));
    // independent certificate: the field discriminants differ (-108 vs -243)
    auto K2 = NumberField::create(IntPoly{-2, 0, 0, 1}, true);
    auto K3 = NumberField::create(IntPoly{-3, 0, 0, 1}, true);
    auto d2 = field_discriminant(K2), d3 = field_discriminant(K3);
    REQUIRE(d2.exact);
    REQUIRE(d3.exact);
    CHECK(d2.value != d3.value);
    CHECK(!fields_isomorphic(IntPoly{-2, 0, 0, 1}, IntPoly{-3, 0, 0, 1}));
    CHECK_THROWS_AS(fields_isomorphic(IntPoly{-4, 0, 1}, IntPoly{-2, 0, 1}),
                    std::invalid_argument);
}

TEST_CASE("isomorphism fixture: 30 quadratic cases with a square-class oracle") {
    // oracle: Q(sqrt m1) = Q(sqrt m2) iff the squarefree parts of the
    // discriminants agree -- computed here from integer factorization only
    std::vector<IntPoly> pool = {
        IntPoly{-2, 0, 1},  IntPoly{-8, 0, 1},  IntPoly{-3, 0, 1},  IntPoly{-12, 0, 1},
        IntPoly{5, 0, 1},   IntPoly{20, 0, 1},  IntPoly{-1, -1, 1}, IntPoly{-5, -5, 5},
        IntPoly{1, 1, 1},   IntPoly{1, -1, 1},  IntPoly{3, -2, 2},  IntPoly{-7, 0, 1},
    };
    int cases = 0;
    for (size_t i = 0; i < pool.size() && cases < 30; ++i) {
        for (size_t j = i; j < pool.size() && cases < 30; ++j) {
            const IntPoly &f = pool[i], &g = pool[j];
            if (!is_irreducible_q(f) || !is_irreducible_q(g)) continue;
            mpz_class df = f.coeff(1) * f.coeff(1) - 4 * f.coeff(2) * f.coeff(0);
            mpz_class dg = g.coeff(1) * g.coeff(1) - 4 * g.coeff(2) * g.coeff(0);
            bool oracle = squarefree_part(df) == squarefree_part(dg);
            bool got = fields_isomorphic(f, g);
            INFO(f.str() << " vs " << g.str());
            CHECK(got == oracle);
            if (i == j) CHECK(got);  // reflexive
            CHECK(fields_isomorphic(g, f) == got);  // symmetric
            ++cases;
        }
    }
    REQUIRE(cases == 30);
}

TEST_CASE("minpoly of integer combinations") {
    CHECK(minpoly_of_combination(IntPoly{-2, 0, 1}, IntPoly{-3, 0, 1}, 1, 1) ==
          IntPoly{1, 0, -10, 0, 1});
    CHECK(minpoly_of_combination(IntPoly{-2, 0, 1}, IntPoly{-3, 0, 1}, 1, 0) == IntPoly{-2, 0, 1});
    // sqrt2 + sqrt(5/7): eliminate to 49 x^4 - 266 x^2 + 81
    //   gamma^2 = 19/7 + 2 sqrt(10/7); (gamma^2 - 19/7)^2 = 40/7
    CHECK(minpoly_of_combination(IntPoly{-2, 0, 1}, IntPoly{-5, 0, 7}, 1, 1) ==
          IntPoly{81, 0, -266, 0, 49});
    CHECK_THROWS_AS(minpoly_of_combination(IntPoly{-2, 0, 1}, IntPoly{-3, 0, 1}, 0, 0),
                    std::invalid_argument);
    // degree divides the product of the degrees
    IntPoly m = minpoly_of_combination(IntPoly{-2, 0, 1}, IntPoly{-8, 0, 1}, 1, 1);
    CHECK((2 * 2) % m.degree() == 0);
}

TEST_CASE("Dedekind p-maximality") {
    auto K5 = NumberField::create(IntPoly{-5, 0, 1}, true);
    CHECK(!dedekind_p_maximal(K5, 2));  // ring of integers is Z[(1+sqrt5)/2]
    auto Km5 = NumberField::create(IntPoly{5, 0, 1}, true);
    CHECK(dedekind_p_maximal(Km5, 2));
    auto K2 = NumberField::create(IntPoly{-2, 0, 1}, true);
    CHECK(dedekind_p_maximal(K2, 7));
}

TEST_CASE("field discriminants with certification") {
    auto a = field_discriminant(NumberField::create(IntPoly{5, 0, 1}, true));
    CHECK(a.exact);
    CHECK(a.value == -20);
    auto b = field_discriminant(NumberField::create(IntPoly{-5, 0, 1}, true));
    CHECK(b.exact);
    CHECK(b.value == 5);
    // pure cubic x^3 - 2: disc(g) = -108 and Z[2^(1/3)] is maximal
    // (c = ab^2 with a = 2, b = 1: index b = 1, Delta = -27 a^2 b^2 = -108)
    auto c = field_discriminant(NumberField::create(IntPoly{-2, 0, 0, 1}, true));
    CHECK(c.exact);
    CHECK(c.value == -108);
    // exact quadratic discs are 0 or 1 mod 4
    for (long m : {-1, -2, -3, 2, 3, 5, 6, 7, 10, -5, -6, -7}) {
        auto d = field_discriminant(NumberField::create(IntPoly{-m, 0, 1}, true));
        REQUIRE(d.exact);
        mpz_class r = ((d.value % 4) + 4) % 4;
        CHECK((r == 0 || r == 1));
    }
}

TEST_CASE("multi-model discriminants: pure cubics with index") {
    // Q((5/7)^(1/3)) via x^3 - 245 and x^3 - 175; classical value for
    // c = a b^2 (a = 5, b = 7, a^2 != b^2 mod 9): Delta = -27 a^2 b^2 = -33075
    auto m1 = NumberField::create(IntPoly{-245, 0, 0, 1});
    auto m2 = NumberField::create(IntPoly{-175, 0, 0, 1});
    auto single = field_discriminant(m1);
    CHECK(!single.exact);  // v_7(disc) = 4 and not 7-maximal: undecided alone
    auto merged = field_discriminant_multi({m1, m2});
    REQUIRE(merged.exact);
    CHECK(merged.value == -33075);
}

TEST_CASE("splits_completely agrees with the Legendre criterion") {
    for (long m : {2, -1, 5, -5, 3, 17}) {
        auto K = NumberField::create(IntPoly{-m, 0, 1}, true);
        mpz_class disc = (((mpz_class(m) - 1) % 4) == 0) ? mpz_class(m) : mpz_class(4 * m);
        int checked = 0;
        for (u64 p = 2; p < 10000; ++p) {
            if (!is_prime_u64(p)) continue;
            if (mpz_divisible_ui_p(K->defining_disc().get_mpz_t(), p)) continue;
            bool expect = kronecker(disc, mpz_class(static_cast<unsigned long>(p))) == 1;
            REQUIRE(splits_completely(K, mpz_class(static_cast<unsigned long>(p))) == expect);
            ++checked;
        }
        CHECK(checked > 1000);
    }
}

TEST_CASE("splits_completely beyond the word range") {
    auto K = NumberField::create(IntPoly{-2, 0, 1}, true);
    // 2^89 - 1 is prime; 2 = (2^45)^2 / 2^89... use the Kronecker oracle
    mpz_class p = (mpz_class(1) << 89) - 1;
    REQUIRE(is_prime_mpz(p).prime);
    bool expect = kronecker(8, p) == 1;
    CHECK(splits_completely(K, p) == expect);
}
