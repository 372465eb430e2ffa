#include <catch2/catch_amalgamated.hpp>

#include "smallgen/abelian.hpp"
#include "smallgen/numfield.hpp"
#include "testutil.hpp"

using namespace smallgen;

TEST_CASE("subgroup expansion") {
    CHECK(subgroup_expand(5, {4}) == std::vector<unsigned long>{1, 4});
    CHECK(subgroup_expand(8, {}) == std::vector<unsigned long>{1});
    CHECK(subgroup_expand(12, {5, 7}) == std::vector<unsigned long>{1, 5, 7, 11});
    CHECK_THROWS_AS(subgroup_expand(12, {6}), std::invalid_argument);
}

TEST_CASE("character tables and conductors") {
    auto q5 = make_abelian_spec(5, {4});  // Q(sqrt 5)
    auto t5 = character_group(q5);
    REQUIRE(t5.chars.size() == 2);
    std::multiset<unsigned long> conds;
    for (auto& c : t5.chars) conds.insert(c.conductor);
    CHECK(conds == std::multiset<unsigned long>{1, 5});

    auto z5 = make_abelian_spec(5, {});  // Q(zeta_5)
    auto tz = character_group(z5);
    conds.clear();
    for (auto& c : tz.chars) conds.insert(c.conductor);
    CHECK(conds == std::multiset<unsigned long>{1, 5, 5, 5});

    auto z8 = make_abelian_spec(8, {});
    auto t8 = character_group(z8);
    conds.clear();
    for (auto& c : t8.chars) conds.insert(c.conductor);
    CHECK(conds == std::multiset<unsigned long>{1, 4, 8, 8});
}

TEST_CASE("conductor-discriminant formula") {
    CHECK(conductor_discriminant(make_abelian_spec(5, {})) == 125);
    CHECK(conductor_discriminant(make_abelian_spec(5, {4})) == 5);
    CHECK(conductor_discriminant(make_abelian_spec(8, {})) == 256);
}

TEST_CASE("field conductor with minimization") {
    auto a = field_conductor(make_abelian_spec(5, {4}));
    CHECK(a.conductor == 5);
    // full subgroup: the field is Q, conductor 1
    auto full = field_conductor(make_abelian_spec(15, {2, 4, 7, 8, 11, 13, 14}));
    CHECK(full.conductor == 1);
    CHECK(full.minimized.degree == 1);
    // Q(sqrt -5): conductor 20 = |disc|, the bound holds with equality
    auto c = field_conductor(make_abelian_spec(20, {3}));
    CHECK(c.conductor == 20);
    CHECK(c.abs_disc == 20);
    CHECK(c.conductor_bound_ok);
    // non-minimal modulus: Q(sqrt 5) presented mod 15
    auto m = field_conductor(make_abelian_spec(15, {4, 11}));
    CHECK(m.conductor == 5);
    CHECK(m.minimized.modulus == 5);
    CHECK(m.minimized.degree == 2);
}

TEST_CASE("Gaussian period defining polynomials") {
    CHECK(defining_polynomial(make_abelian_spec(5, {4})) == IntPoly{-1, 1, 1});
    // conductor-7 subfields: the subgroup {1,6} gives the classical cubic,
    // the squares {1,2,4} give the quadratic of Q(sqrt -7)
    CHECK(defining_polynomial(make_abelian_spec(7, {6})) == IntPoly{-1, -2, 1, 1});
    CHECK(defining_polynomial(make_abelian_spec(7, {2})) == IntPoly{2, 1, 1});
    CHECK(defining_polynomial(make_abelian_spec(5, {})) == IntPoly{1, 1, 1, 1, 1});
    CHECK(defining_polynomial(make_abelian_spec(1, {})) == IntPoly{-1, 1});
}

TEST_CASE("sharp splitting criterion") {
    auto z5 = make_abelian_spec(5, {});
    CHECK(splits_completely_abelian(z5, 11));   // 11 = 1 mod 5
    auto q5 = make_abelian_spec(5, {4});
    CHECK(!splits_completely_abelian(q5, 7));   // 7 mod 5 = 2 not in {1, 4}
    CHECK(splits_completely_abelian(q5, 19));   // 19 mod 5 = 4
    CHECK(!splits_completely_abelian(q5, 5));   // ramified
}

TEST_CASE("quadratic abelian presentations") {
    auto s = quadratic_abelian_spec(-5);
    CHECK(s.modulus == 20);
    CHECK(s.subgroup == std::vector<unsigned long>{1, 3, 7, 9});
    auto s5 = quadratic_abelian_spec(5);
    CHECK(s5.modulus == 5);
    CHECK(s5.subgroup == std::vector<unsigned long>{1, 4});
    CHECK_THROWS_AS(quadratic_abelian_spec(12), std::invalid_argument);
}

TEST_CASE("cross-module: conductor-discriminant vs field_discriminant, f <= 26") {
    for (unsigned long f = 1; f <= 26; ++f) {
        for (const auto& H : enumerate_subgroups(f)) {
            AbelianSpec spec = make_abelian_spec(f, H);
            mpz_class cd = conductor_discriminant(spec);
            IntPoly g = defining_polynomial(spec);
            if (spec.degree == 1) {
                CHECK(cd == 1);
                continue;
            }
            auto dr = field_discriminant(NumberField::create(g, true));
            INFO("f = " << f << ", |H| = " << H.size() << ", g = " << g.str());
            REQUIRE(dr.exact);
            CHECK(abs(dr.value) == cd);
        }
    }
}

TEST_CASE("cross-module: sharp splitting vs polynomial splitting") {
    for (unsigned long f : {5ul, 7ul, 8ul, 11ul, 12ul, 15ul, 16ul, 20ul}) {
        for (const auto& H : enumerate_subgroups(f)) {
            AbelianSpec spec = make_abelian_spec(f, H);
            if (spec.degree < 2) continue;
            auto fc = field_conductor(spec);
            IntPoly g = defining_polynomial(spec);
            auto K = NumberField::create(g, true);
            for (u64 p = 2; p < 2000; ++p) {
                if (!is_prime_u64(p) || f % p == 0) continue;
                mpz_class pz(static_cast<unsigned long>(p));
                if (mpz_divisible_ui_p(K->defining_disc().get_mpz_t(), p)) continue;
                INFO("f = " << f << " p = " << p << " g = " << g.str());
                REQUIRE(splits_completely_abelian(spec, pz) == splits_completely(K, pz));
            }
        }
    }
}

TEST_CASE("cyclotomic prime-conductor discriminants: f^(f-2)") {
    for (unsigned long f : {3ul, 5ul, 7ul, 11ul, 13ul}) {
        mpz_class d = conductor_discriminant(make_abelian_spec(f, {}));
        CHECK(d == pow_mpz(mpz_class(f), f - 2));
    }
}

TEST_CASE("conductor bound f <= |disc|^(2/d) across small corpus") {
    for (unsigned long f = 1; f <= 30; ++f) {
        for (const auto& H : enumerate_subgroups(f)) {
            AbelianSpec spec = make_abelian_spec(f, H);
            auto fc = field_conductor(spec);
            INFO("f = " << f << " |H| = " << H.size());
            CHECK(fc.conductor_bound_ok);
        }
    }
}
