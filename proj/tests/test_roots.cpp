#include <catch2/catch_amalgamated.hpp>

#include "smallgen/roots.hpp"
#include "testutil.hpp"

using namespace smallgen;

namespace {

ComplexBox sum_boxes(const std::vector<ComplexBox>& boxes) {
    ComplexBox acc = ComplexBox::point(Dyadic(0), Dyadic(0));
    for (const auto& b : boxes) acc = acc + b;
    return acc;
}

ComplexBox prod_boxes(const std::vector<ComplexBox>& boxes) {
    ComplexBox acc = ComplexBox::point(Dyadic(1), Dyadic(0));
    for (const auto& b : boxes) acc = acc * b;
    return acc;
}

bool boxes_disjoint(const ComplexBox& a, const ComplexBox& b) {
    bool re_overlap = !(a.re.hi < b.re.lo || b.re.hi < a.re.lo);
    bool im_overlap = !(a.im.hi < b.im.lo || b.im.hi < a.im.lo);
    return !(re_overlap && im_overlap);
}

}  // namespace

TEST_CASE("roots of x^2 + 1 are +-i") {
    auto boxes = complex_roots(IntPoly{1, 0, 1}, default_root_width());
    REQUIRE(boxes.size() == 2);
    CHECK(boxes[0].re.contains(mpq_class(0)));
    CHECK(boxes[0].im.contains(mpq_class(-1)));
    CHECK(boxes[1].im.contains(mpq_class(1)));
}

TEST_CASE("roots of x^2 - x - 1: golden ratio") {
    auto boxes = complex_roots(IntPoly{-1, -1, 1}, default_root_width());
    REQUIRE(boxes.size() == 2);
    // sorted by real part: -0.618..., then 1.618...
    CHECK(boxes[0].im.is_point());
    CHECK(boxes[1].im.is_point());
    double r = boxes[1].re.mid().to_double();
    CHECK(std::abs(r - 1.6180339887498949) < 1e-12);
    double l = boxes[0].re.mid().to_double();
    CHECK(std::abs(l + 0.6180339887498949) < 1e-12);
}

TEST_CASE("roots of x^3 - 2") {
    auto boxes = complex_roots(IntPoly{-2, 0, 0, 1}, default_root_width());
    REQUIRE(boxes.size() == 3);
    int reals = 0, complexes = 0;
    for (auto& b : boxes) {
        if (b.im.is_point() && b.im.lo.is_zero())
            ++reals;
        else
            ++complexes;
    }
    CHECK(reals == 1);
    CHECK(complexes == 2);
    // the real root is 2^(1/3) = 1.2599...
    for (auto& b : boxes)
        if (b.im.is_point()) CHECK(std::abs(b.re.mid().to_double() - 1.2599210498948732) < 1e-12);
}

TEST_CASE("root sums and products match the coefficients") {
    std::vector<IntPoly> cases = {
        IntPoly{-1, -1, 1}, IntPoly{-2, 0, 0, 1}, IntPoly{1, 0, 1}, IntPoly{3, -2, 0, 5},
        IntPoly{1, 1, 1, 1, 1},
    };
    for (const auto& f : cases) {
        auto boxes = complex_roots(f, default_root_width());
        int d = f.degree();
        // sum = -a_{d-1}/a_d
        ComplexBox s = sum_boxes(boxes);
        mpq_class expect_sum(-f.coeff(d - 1), f.lead());
        expect_sum.canonicalize();
        CHECK(s.re.contains(expect_sum));
        CHECK(s.im.contains(mpq_class(0)));
        // product = (-1)^d a_0/a_d
        ComplexBox p = prod_boxes(boxes);
        mpq_class expect_prod(f.coeff(0), f.lead());
        expect_prod.canonicalize();
        if (d % 2) expect_prod = -expect_prod;
        CHECK(p.re.contains(expect_prod));
        CHECK(p.im.contains(mpq_class(0)));
    }
}

TEST_CASE("boxes are pairwise disjoint, counted, and conjugate-symmetric") {
    int done = 0;
    while (done < 25) {
        IntPoly f = testutil::random_poly(testutil::rand_int(1, 5), 8);
        if (!is_squarefree_poly(f)) continue;
        Dyadic w(mpz_class(1), -60);
        auto boxes = complex_roots(f, w);
        REQUIRE(static_cast<int>(boxes.size()) == f.degree());
        for (size_t i = 0; i < boxes.size(); ++i) {
            CHECK(boxes[i].re.width() <= w);
            CHECK(boxes[i].im.width() <= w);
            for (size_t j = i + 1; j < boxes.size(); ++j)
                CHECK(boxes_disjoint(boxes[i], boxes[j]));
        }
        // conjugate symmetry: every nonreal box has its mirror
        for (const auto& b : boxes) {
            if (b.im.lo.sign() > 0) {
                bool found = false;
                for (const auto& c : boxes)
                    if (c.re.lo == b.re.lo && c.re.hi == b.re.hi && c.im.lo == -b.im.hi &&
                        c.im.hi == -b.im.lo)
                        found = true;
                CHECK(found);
            }
        }
        ++done;
    }
}

TEST_CASE("non-squarefree input rejected") {
    CHECK_THROWS_AS(complex_roots(IntPoly{-2, 0, 1} * IntPoly{-2, 0, 1}, default_root_width()),
                    std::invalid_argument);
}

TEST_CASE("rational roots land in tight brackets") {
    // 6x^2 - 5x + 1: roots 1/2 and 1/3
    auto boxes = complex_roots(IntPoly{1, -5, 6}, Dyadic(mpz_class(1), -100));
    REQUIRE(boxes.size() == 2);
    CHECK(boxes[0].re.contains(mpq_class(1, 3)));
    CHECK(boxes[1].re.contains(mpq_class(1, 2)));
}
