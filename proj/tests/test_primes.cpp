#include <catch2/catch_amalgamated.hpp>

#include "smallgen/primes.hpp"
#include "testutil.hpp"

using namespace smallgen;

TEST_CASE("prime counting in progressions") {
    // primes = 1 mod 4 up to 100: 5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97
    CHECK(pi_qa(100, make_ap_spec(4, 1)) == 11);
    CHECK(pi_qa(10, make_ap_spec(3, 2)) == 2);  // 2, 5
    CHECK(pi_qa(1, make_ap_spec(7, 3)) == 0);
    CHECK(pi_qa(100, make_ap_spec(4, 1), CountMethod::Direct) == 11);
}

TEST_CASE("sieve and direct counts agree on a grid") {
    for (u64 x : {1000ull, 30000ull}) {
        for (unsigned long q : {3ul, 4ul, 8ul, 12ul, 30ul}) {
            for (unsigned long a = 1; a <= q; ++a) {
                if (std::gcd(a, q) != 1) continue;
                auto spec = make_ap_spec(q, a);
                CHECK(pi_qa(x, spec) == pi_qa(x, spec, CountMethod::Direct));
            }
        }
    }
}

TEST_CASE("residue classes partition the primes") {
    u64 x = 50000;
    for (unsigned long q : {4ul, 12ul, 30ul}) {
        u64 total = 0;
        for (unsigned long a = 1; a <= q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            total += pi_qa(x, make_ap_spec(q, a));
        }
        u64 all = pi_qa(x, make_ap_spec(1, 1));
        u64 dividing = 0;
        for (u64 p = 2; p <= q; ++p)
            if (is_prime_u64(p) && q % p == 0) ++dividing;
        CHECK(total == all - dividing);
    }
}

TEST_CASE("psi via the von Mangoldt function") {
    auto p1 = psi_qa(10, make_ap_spec(3, 1));  // n in {4, 7}: log 2 + log 7
    CHECK(p1.mult == std::map<u64, u64>{{2, 1}, {7, 1}});
    CHECK(std::abs(p1.comb().approx() - std::log(14.0)) < 1e-12);

    auto p2 = psi_qa(1, make_ap_spec(5, 2));
    CHECK(p2.mult.empty());

    auto p3 = psi_qa(9, make_ap_spec(4, 1));  // n in {5, 9}: log 5 + log 3
    CHECK(p3.mult == std::map<u64, u64>{{3, 1}, {5, 1}});
}

TEST_CASE("pi-psi sandwich") {
    auto a = check_pi_psi_sandwich(100, make_ap_spec(4, 1));
    CHECK(a.lower_ok);
    CHECK(a.upper_ok);

    // x = 2, q = 1: psi = log 2, pi = 1, pi(sqrt 2) = 0; upper holds exactly
    auto b = check_pi_psi_sandwich(2, make_ap_spec(1, 1));
    CHECK(b.lower_ok);
    CHECK(b.upper_ok);
    CHECK(b.upper_slack == 0.0);

    auto c = check_pi_psi_sandwich(10000, make_ap_spec(12, 1));
    CHECK(c.lower_ok);
    CHECK(c.upper_ok);

    // the Lambda-form would fail here; the prime-restricted form cannot
    auto d = check_pi_psi_sandwich(100, make_ap_spec(20, 9));
    CHECK(d.lower_ok);
    CHECK(d.upper_ok);
}

TEST_CASE("least primes in progressions") {
    CHECK(least_prime_in_ap_above(12, 1, 0).p == 13);
    CHECK(least_prime_in_ap_above(12, 1, 13).p == 37);  // 25 is composite
    CHECK(least_prime_in_ap_above(4, 1, 0).p == 5);
    // beyond 2^64 the verdict is flagged probable
    mpz_class big = (mpz_class(1) << 70);
    auto fp = least_prime_in_ap_above(3, 1, big);
    CHECK(fp.probable);
    CHECK(fp.p % 3 == 1);
}

TEST_CASE("primes in intervals") {
    auto a = prime_in_interval_ap(10, 50, 4, 1);
    REQUIRE(a);
    CHECK(a->p == 13);
    CHECK(!prime_in_interval_ap(13, 14, 12, 1));

    // (sqrt 20, 5 sqrt 20]: no prime = 1 mod 20, but 7 under the sharp set
    CHECK(!least_split_prime_sqrt_interval(20, 5, 20, {1}));
    auto sharp = least_split_prime_sqrt_interval(20, 5, 20, {1, 3, 7, 9});
    REQUIRE(sharp);
    CHECK(sharp->p == 7);
}

TEST_CASE("L_U evaluator with the footnote constants") {
    LinnikParameters par;
    par.c = 1;
    par.c1 = mpq_class(1, 10);
    par.c2 = 3;
    par.c3 = mpq_class(1, 2);
    par.U = 13;
    auto r = evaluate_L_U(par, mpq_class(5));
    CHECK(r.u_constraint_ok);  // 13 > 3 * 8 / 2 = 12
    // dominating term: 4 log 26 / (1/10) = 40 log 26
    RealEnclosure ref = log_of_mpq(26, 256) * Dyadic(40);
    CHECK(r.value.intersect(ref).has_value());
    CHECK(r.value.width_below(40));

    // log term vanishes at U = 1/2 (2Uc = 1): max(12, 8, 0, 0) = 12
    par.U = mpq_class(1, 2);
    auto s = evaluate_L_U(par);
    CHECK(s.value.contains(mpq_class(12)));
    CHECK(s.value.width_below(60));
}

TEST_CASE("L_U is monotone in U") {
    testutil::rng.seed(7);
    int done = 0;
    while (done < 100) {
        LinnikParameters par;
        par.c = mpq_class(testutil::rand_int(1, 8), testutil::rand_int(1, 4));
        if (par.c <= 0) continue;
        par.c1 = mpq_class(testutil::rand_int(1, 9), 10);
        par.c2 = 1 + mpq_class(testutil::rand_int(1, 30), 7);
        par.c3 = mpq_class(testutil::rand_int(1, 9), 10);
        par.U = 1 + mpq_class(testutil::rand_int(0, 40), 3);
        if (!(par.c2 > 1 && par.c1 < 1 && par.c3 < 1)) continue;
        auto lo = evaluate_L_U(par);
        LinnikParameters par2 = par;
        par2.U = par.U * mpq_class(testutil::rand_int(2, 9));
        auto hi = evaluate_L_U(par2);
        CHECK(hi.value.hi >= lo.value.hi);
        CHECK(hi.value.lo >= lo.value.lo);
        ++done;
    }
}

TEST_CASE("nu and eta evaluators") {
    LinnikParameters par;
    par.c = 1;
    par.c1 = mpq_class(1, 10);
    par.c2 = 3;
    par.c3 = mpq_class(1, 2);
    par.U = 13;
    auto nu = evaluate_nu(par);
    // max{12, 40, 8, 4 log 26 / (0.5 log 10)} = 40
    CHECK(nu.value.contains(mpq_class(40)));
    CHECK(nu.value.width_below(60));

    // eta without an exceptional zero at log q = 2: (1/10) / 4 = 1/40
    RealEnclosure logq = RealEnclosure::point(Dyadic(2));
    RealEnclosure eta = evaluate_eta_with_logq(par, logq, 160);
    CHECK(eta.contains(mpq_class(1, 40)));

    // with delta1 = 1/8 and log q = 2: arg = 1/2, eta = c3 log 2 / 4
    par.delta1 = mpq_class(1, 8);
    RealEnclosure eta2 = evaluate_eta_with_logq(par, logq, 160);
    RealEnclosure ref = div_encl(log_of_mpq(2, 200), mpq_class(8), 200);
    CHECK(eta2.intersect(ref).has_value());
    CHECK(eta2.width_below(100));

    // the spec's e^2 example: delta1 near 1/(4e) makes eta near 1/8
    par.delta1 = mpq_class(9196986, 100000000);
    RealEnclosure eta3 = evaluate_eta_with_logq(par, logq, 160);
    CHECK(std::abs(eta3.mid().to_double() - 0.125) < 1e-4);
}

TEST_CASE("linnik exponent scan") {
    auto res = linnik_exponent_scan(40);
    REQUIRE(res.rows.size() == 38);
    CHECK(res.rows[0].q == 3);
    CHECK(res.rows[0].least_prime == 7);
    CHECK(std::abs(res.rows[0].ratio - std::log(7.0) / std::log(3.0)) < 1e-12);
    CHECK(res.rows[1].least_prime == 5);   // q = 4
    CHECK(res.rows[9].q == 12);
    CHECK(res.rows[9].least_prime == 13);
    for (auto& r : res.rows) {
        CHECK(is_prime_u64(r.least_prime));
        CHECK(r.least_prime % r.q == 1);
        CHECK(!r.probable);
    }
}

TEST_CASE("euler phi") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(20) == 8);
    CHECK(euler_phi(97) == 96);
    CHECK(euler_phi(5040) == 1152);
}
