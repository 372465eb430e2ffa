#include <catch2/catch_amalgamated.hpp>

#include "smallgen/mahler.hpp"
#include "testutil.hpp"

using namespace smallgen;

TEST_CASE("Mahler measure worked examples") {
    // golden ratio: M(x^2 - x - 1) = phi, certified via phi^2 = phi + 1
    auto m = mahler_measure(IntPoly{-1, -1, 1});
    CHECK(!m.exact);
    RealEnclosure check = square(m.measure) - m.measure - RealEnclosure::point(Dyadic(1));
    CHECK(check.contains_zero());
    CHECK(m.measure.width_below(78));

    // all roots on the unit circle
    auto one = mahler_measure(IntPoly{-1, 0, 0, 0, 0, 1});  // x^5 - 1
    REQUIRE(one.exact);
    CHECK(*one.exact == 1);
    CHECK(one.exact_one);

    // 2x - 1: M = |lead| * max(1, 1/2) = 2
    auto two = mahler_measure(IntPoly{-1, 2});
    REQUIRE(two.exact);
    CHECK(*two.exact == 2);
}

TEST_CASE("on-circle roots of non-cyclotomic polynomials are exact") {
    // 3x^2 - 4x + 3: both roots satisfy |rho| = 1 but are not roots of unity
    auto m = mahler_measure(IntPoly{3, -4, 3});
    REQUIRE(m.exact);
    CHECK(*m.exact == 3);
    CHECK(!m.exact_one);
    // Salem-type quartic x^4 - x^3 - x^2 - x + 1 keeps an on-circle pair;
    // measure = the largest real root, irrational
    auto s = mahler_measure(IntPoly{1, -1, -1, -1, 1});
    CHECK(!s.exact);
    CHECK(s.measure.lo > Dyadic(1));
    double v = s.measure.mid().to_double();
    CHECK(std::abs(v - 1.7220838057390600) < 1e-10);
}

TEST_CASE("exact all-inside / all-outside detection") {
    // q x^n - p with p < q: all roots inside, M = q
    auto a = mahler_measure(IntPoly{-5, 0, 7});
    REQUIRE(a.exact);
    CHECK(*a.exact == 7);
    // x^2 - 35: both roots outside, M = |constant| = 35
    auto b = mahler_measure(IntPoly{-35, 0, 1});
    REQUIRE(b.exact);
    CHECK(*b.exact == 35);
    // 2x^2 - 2x + 3: complex pair of modulus sqrt(3/2), M = |constant| = 3
    auto c = mahler_measure(IntPoly{3, -2, 2});
    REQUIRE(c.exact);
    CHECK(*c.exact == 3);
}

TEST_CASE("M >= 1 and multiplicativity containment") {
    int done = 0;
    while (done < 20) {
        IntPoly f = testutil::random_poly(testutil::rand_int(1, 3), 5);
        IntPoly g = testutil::random_poly(testutil::rand_int(1, 3), 5);
        if (f.is_zero() || g.is_zero()) continue;
        auto mf = mahler_measure(f);
        auto mg = mahler_measure(g);
        auto mfg = mahler_measure(f * g);
        CHECK(mf.measure.hi >= Dyadic(1));
        CHECK(mfg.measure.hi >= Dyadic(1));
        // M(fg) = M(f) M(g): the enclosures must overlap
        RealEnclosure prod = mf.measure * mg.measure;
        CHECK(prod.intersect(mfg.measure).has_value());
        ++done;
    }
}

TEST_CASE("content and x powers contribute |content| and 1") {
    auto m = mahler_measure(IntPoly{0, 0, -6, 6});  // 6 x^2 (x - 1)
    REQUIRE(m.exact);
    CHECK(*m.exact == 6);
}
