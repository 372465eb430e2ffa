#include <catch2/catch_amalgamated.hpp>

#include "smallgen/numfield.hpp"
#include "testutil.hpp"

using namespace smallgen;

TEST_CASE("heights of rationals") {
    auto h = LogHeight::of_rational(mpq_class(1, 2));
    REQUIRE(h.exact_mahler());
    CHECK(*h.exact_mahler() == 2);  // H(1/2) = max(1, 2) = 2

    auto z = LogHeight::of_rational(0);
    CHECK(z.exact_one());

    auto n = LogHeight::of_rational(mpq_class(-7, 3));
    REQUIRE(n.exact_mahler());
    CHECK(*n.exact_mahler() == 7);
}

TEST_CASE("heights of algebraic numbers") {
    // (5/7)^(1/2): H = 7^(1/2), i.e. M(7x^2 - 5) = 7
    auto h = LogHeight::of_algebraic(IntPoly{-5, 0, 7});
    REQUIRE(h.exact_mahler());
    CHECK(*h.exact_mahler() == 7);
    CHECK(h.degree() == 2);

    // primitive 5th root of unity
    auto z = LogHeight::of_algebraic(cyclotomic(5));
    CHECK(z.exact_one());

    // x^2 - x - 1: H = phi^(1/2); 2 log H encloses log phi
    auto g = LogHeight::of_algebraic(IntPoly{-1, -1, 1});
    RealEnclosure twolog = g.log_value(96) * Dyadic(2);
    // reference: log phi via sqrt(5) enclosure
    RealEnclosure sqrt5 = sqrt_encl(RealEnclosure::point(Dyadic(5)), 200);
    RealEnclosure phi = (sqrt5 + RealEnclosure::point(Dyadic(1))) * Dyadic(mpz_class(1), -1);
    RealEnclosure logphi = log_encl(phi, 200);
    CHECK(twolog.intersect(logphi).has_value());
    CHECK(twolog.width_below(90));

    CHECK_THROWS_AS(LogHeight::of_algebraic(IntPoly{-4, 0, 0, 0, 1}), std::invalid_argument);
}

TEST_CASE("height comparisons") {
    auto hphi = LogHeight::of_algebraic(IntPoly{-1, -1, 1});   // phi^(1/2) = 1.272...
    auto h2 = LogHeight::of_rational(2);
    CHECK(compare(hphi, h2) == Ordering::Less);
    CHECK(compare(h2, hphi) == Ordering::Greater);

    auto a = LogHeight::of_algebraic(IntPoly{-3, 0, 1});
    auto b = LogHeight::of_algebraic(IntPoly{-3, 0, 1});
    CHECK(compare(a, b) == Ordering::Equal);

    // same height from a different representation: 1/sqrt(3) via reversal
    auto c = LogHeight::of_algebraic(IntPoly{-1, 0, 3});
    CHECK(compare(a, c) == Ordering::Equal);

    // cross-degree exact comparison: H(2^(1/4)) < H(2^(1/2))
    auto q4 = LogHeight::of_algebraic(IntPoly{-2, 0, 0, 0, 1});
    auto q2 = LogHeight::of_algebraic(IntPoly{-2, 0, 1});
    CHECK(compare(q4, q2) == Ordering::Less);
}

TEST_CASE("compare against rational powers") {
    auto h = LogHeight::of_algebraic(IntPoly{-5, 0, 7});  // H = 7^(1/2)
    CHECK(compare_to_power(h, 7, 1, 2) == Ordering::Equal);
    CHECK(compare_to_power(h, 8, 1, 2) == Ordering::Less);
    CHECK(compare_to_power(h, 6, 1, 2) == Ordering::Greater);
}

TEST_CASE("H(alpha^k) = H(alpha)^k on field elements") {
    auto K = NumberField::create(IntPoly{-2, 0, 1}, true);
    auto L = NumberField::create(IntPoly{-2, 0, 0, 1}, true);
    std::vector<FieldElement> pool;
    for (long a = -2; a <= 2; ++a)
        for (long b = 1; b <= 2; ++b) {
            FieldElement e = element_from_mpq(K, a) + element_theta(K) * mpq_class(b);
            pool.push_back(e);
            FieldElement e3 = element_from_mpq(L, a) + element_theta(L) * mpq_class(b);
            pool.push_back(e3);
        }
    for (const auto& alpha : pool) {
        LogHeight h1 = height_element(alpha);
        for (unsigned long k = 2; k <= 5; ++k) {
            LogHeight hk = height_element(pow(alpha, k));
            RealEnclosure lhs = h1.log_value(120) * Dyadic(static_cast<long>(k));
            RealEnclosure rhs = hk.log_value(120);
            CHECK(lhs.intersect(rhs).has_value());
        }
    }
}

TEST_CASE("H(1/alpha) = H(alpha)") {
    int done = 0;
    while (done < 20) {
        IntPoly f = testutil::random_poly(2, 6);
        if (f.coeff(0) == 0 || !is_irreducible_q(f)) continue;
        auto h = LogHeight::of_algebraic(f, true);
        auto hr = LogHeight::of_algebraic(reverse_poly(f).primitive_part(), true);
        CHECK(compare(h, hr) == Ordering::Equal);
        ++done;
    }
}

TEST_CASE("H(a alpha + b beta) <= 2 d^2 H(alpha) H(beta)") {
    // random combinations in degree <= 4 composita
    std::vector<IntPoly> quads = {IntPoly{-2, 0, 1}, IntPoly{-3, 0, 1}, IntPoly{1, -1, 1},
                                  IntPoly{5, 0, 1},  IntPoly{-1, -1, 1}};
    int done = 0;
    for (size_t i = 0; i < quads.size() && done < 200; ++i) {
        for (size_t j = 0; j < quads.size() && done < 200; ++j) {
            for (long a = 1; a <= 3 && done < 200; ++a) {
                for (long b = 1; b <= 3 && done < 200; ++b) {
                    IntPoly gamma = minpoly_of_combination(quads[i], quads[j], a, b, true);
                    int d = gamma.degree();
                    if (a >= d || b >= d) continue;  // the bound assumes 0 <= a, b < d
                    LogHeight hg = LogHeight::of_algebraic(gamma, true);
                    LogHeight h1 = LogHeight::of_algebraic(quads[i], true);
                    LogHeight h2 = LogHeight::of_algebraic(quads[j], true);
                    // log H(gamma) <= log(2 d^2) + log H(alpha) + log H(beta)
                    RealEnclosure lhs = hg.log_value(96);
                    RealEnclosure rhs = h1.log_value(96) + h2.log_value(96) +
                                        log_of_mpq(mpq_class(2 * d * d), 128);
                    CHECK(lhs.lo <= rhs.hi);
                    ++done;
                }
            }
        }
    }
}

TEST_CASE("deg * log H encloses log M") {
    auto h = LogHeight::of_algebraic(IntPoly{-1, -1, 1});
    RealEnclosure lhs = h.log_value(100) * Dyadic(2);
    RealEnclosure logm = log_encl(h.mahler(100), 130);
    CHECK(lhs.intersect(logm).has_value());
}
