#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smallgen/abelian.hpp"
#include "smallgen/northcott.hpp"
#include "smallgen/numfield.hpp"
#include "smallgen/primes.hpp"

namespace smallgen {

// End-to-end verifiers tying the modules together into theorem-level
// checks.  Every inequality is decided exactly (integerized powers) or via
// certified enclosures; verdicts on quantities with uncertain inputs are
// three-valued.

enum class Verdict { Holds, Fails, Undecided };

inline const char* verdict_str(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        default: return "undecided";
    }
}

// ------------------------------------------------------- Silverman bound

// delta(K/Q) >= (n^m |Delta_F|)^(-1/(2m(n-1))) |Delta_K|^(1/(2d(n-1))),
// with the F = Q case m = 1, n = d.  Comparisons integerize:
//   H >= bound  <=>  M^(2(n-1)) n^d |Delta_F|^n >= |Delta_K|.
struct SilvermanBound {
    unsigned long d = 2, n = 2, m = 1;
    mpz_class abs_disc_k = 1;
    mpz_class abs_disc_f = 1;

    RealEnclosure value(unsigned long prec = 128) const {
        // exp( log|Delta_K|/(2d(n-1)) - log(n^m |Delta_F|)/(2m(n-1)) )
        RealEnclosure t = log_of_mpq(mpq_class(abs_disc_k), prec);
        t = div_encl(t, mpq_class(2 * d * (n - 1)), prec);
        mpq_class base = pow_mpq(mpq_class(n), m) * mpq_class(abs_disc_f);
        RealEnclosure s = log_of_mpq(base, prec);
        s = div_encl(s, mpq_class(2 * m * (n - 1)), prec);
        RealEnclosure diff = t - s;
        // exp via endpoint evaluation (monotone)
        Mpfr in_lo = to_mpfr_exact(diff.lo), in_hi = to_mpfr_exact(diff.hi);
        Mpfr out(static_cast<mpfr_prec_t>(prec));
        mpfr_exp(out.get(), in_lo.get(), MPFR_RNDD);
        Dyadic lo = dyadic_from_mpfr(out.get());
        mpfr_exp(out.get(), in_hi.get(), MPFR_RNDU);
        Dyadic hi = dyadic_from_mpfr(out.get());
        return RealEnclosure(lo, hi);
    }

    // certified h >= bound (true/false), exact whenever M is
    Verdict height_at_least(const LogHeight& h) const {
        if (static_cast<unsigned long>(h.degree()) != d)
            throw std::invalid_argument("SilvermanBound: degree mismatch");
        mpz_class rhs = abs_disc_k;
        if (h.exact_mahler()) {
            mpq_class lhs = pow_mpq(*h.exact_mahler(), 2 * (n - 1)) *
                            pow_mpq(mpq_class(n), d) * pow_mpq(mpq_class(abs_disc_f), n);
            return lhs >= mpq_class(rhs) ? Verdict::Holds : Verdict::Fails;
        }
        for (long w : {96L, 160L, 256L}) {
            unsigned long prec = static_cast<unsigned long>(w) + 32;
            RealEnclosure lhs = log_encl(h.mahler(w), prec) * Dyadic(2 * (n - 1)) +
                                log_of_mpq(mpq_class(n), prec) * Dyadic(static_cast<long>(d)) +
                                log_of_mpq(mpq_class(abs_disc_f), prec) * Dyadic(static_cast<long>(n));
            RealEnclosure r = log_of_mpq(mpq_class(rhs), prec);
            if (certainly_le(r, lhs)) return Verdict::Holds;
            if (certainly_lt(lhs, r)) return Verdict::Fails;
        }
        return Verdict::Undecided;
    }
};

inline SilvermanBound silverman_lower_bound(unsigned long d, const mpz_class& abs_disc_k) {
    if (d < 2) throw std::invalid_argument("silverman_lower_bound: d must be >= 2");
    return SilvermanBound{d, d, 1, abs_disc_k, 1};
}

inline SilvermanBound silverman_lower_bound_relative(unsigned long d, const mpz_class& abs_disc_k,
                                                     unsigned long n, const mpz_class& abs_disc_f) {
    if (d < 2 || n < 2 || d % n != 0)
        throw std::invalid_argument("silverman_lower_bound: need n > 1 dividing d");
    return SilvermanBound{d, n, d / n, abs_disc_k, abs_disc_f};
}

// -------------------------------------------------------- exponent table

struct ExponentTable {
    unsigned long d = 2;
    unsigned long b = 2;                 // smallest divisor > 1 of d
    mpq_class ruppert;                   // 1/(2d)
    mpq_class ruppert_strong;            // 1/(2d(d-1))
    mpq_class silverman;                 // 1/(2d(d-1))
    mpq_class vw_threshold;              // branch on b <= 3
    std::optional<mpq_class> dubickas;   // odd d only: (d+1)/(2 d^2 (d-1))
    std::vector<std::pair<unsigned long, mpq_class>> family;  // n -> 1/(2d(n-1))
};

inline ExponentTable exponent_table(unsigned long d) {
    if (d < 2) throw std::invalid_argument("exponent_table: d must be >= 2");
    ExponentTable t;
    t.d = d;
    t.b = d;
    for (unsigned long k = 2; k * k <= d; ++k)
        if (d % k == 0) {
            t.b = k;
            break;
        }
    t.ruppert = mpq_class(1, 2 * d);
    t.ruppert_strong = mpq_class(1, 2 * d * (d - 1));
    t.silverman = t.ruppert_strong;
    if (t.b <= 3)
        t.vw_threshold = mpq_class(1, (t.b + 1) * d);
    else
        t.vw_threshold = mpq_class(1, 2 * (t.b + 1) * d) + mpq_class(1, t.b * t.b * (t.b + 1) * d);
    if (d % 2 == 1) t.dubickas = mpq_class(d + 1, 2 * d * d * (d - 1));
    for (unsigned long n = 2; n <= d; ++n)
        if (d % n == 0) t.family.emplace_back(n, mpq_class(1, 2 * d * (n - 1)));
    return t;
}

// ---------------------------------------- abelian discriminant (certified)

// Exact |Delta_K| for an abelian field: start from the period-polynomial
// model and pull in further generating-trace models only while primes stay
// undecided under Dedekind's criterion.
inline DiscriminantResult abelian_field_discriminant(const AbelianSpec& spec) {
    unsigned used = 0;
    IntPoly g0 = defining_polynomial(spec, 0, &used);
    if (g0.degree() == 1) return DiscriminantResult{1, true, {}};
    std::vector<IntPoly> polys{g0};
    std::vector<FieldPtr> models{NumberField::create(g0, true)};
    unsigned attempt = used + 1;
    for (;;) {
        DiscriminantResult dr = field_discriminant_multi(models);
        if (dr.exact || models.size() >= 6 || attempt > 30) return dr;
        try {
            unsigned u2 = attempt;
            IntPoly g = defining_polynomial(spec, attempt, &u2);
            attempt = u2 + 1;
            bool dup = false;
            for (const auto& h : polys) dup = dup || h == g;
            if (!dup) {
                polys.push_back(g);
                models.push_back(NumberField::create(g, true));
            }
        } catch (const precision_error&) {
            return dr;
        }
    }
}

// ------------------------------------------------- theorem-1.2 step check

struct Thm12Report {
    AbelianSpec spec;          // as given
    AbelianSpec minimized;     // at the true conductor
    unsigned long degree = 1;
    unsigned long conductor = 1;
    mpz_class abs_disc;
    bool conductor_bound_ok = false;  // f <= |Delta|^(2/d)
    std::optional<FoundPrime> split_prime_congruent_1;  // p = 1 (mod f) in the slice
    std::optional<FoundPrime> split_prime_sharp;        // p mod f in H in the slice
    // generator section (runs when with_delta and the degree is small)
    bool generator_search_ran = false;
    std::optional<GeneratorSearchResult> generator_below_sharp_prime;
    bool thm41_conclusion_ok = false;   // search succeeded
    std::optional<DeltaCertificate> delta_cert;
    std::optional<Verdict> delta_le_bound;  // delta <= (25 |Delta|)^(1/2d)
};

inline Thm12Report verify_thm12_steps(const AbelianSpec& spec, bool with_delta,
                                      const EnumerationBudget& budget = {}) {
    Thm12Report rep;
    rep.spec = spec;
    auto fc = field_conductor(spec);
    rep.minimized = fc.minimized;
    rep.degree = spec.degree;
    rep.conductor = fc.conductor;
    rep.abs_disc = fc.abs_disc;
    rep.conductor_bound_ok = fc.conductor_bound_ok;

    // split prime in (sqrt|Delta|, 5 sqrt|Delta|]
    rep.split_prime_congruent_1 =
        least_split_prime_sqrt_interval(rep.abs_disc, 5, rep.conductor, {1 % std::max(1ul, rep.conductor)});
    rep.split_prime_sharp = least_split_prime_sqrt_interval(rep.abs_disc, 5, rep.conductor,
                                                            rep.minimized.subgroup);

    if (with_delta && rep.degree >= 2 && rep.degree <= 4) {
        rep.generator_search_ran = true;
        FieldPtr K = NumberField::create(defining_polynomial(rep.minimized), true);
        if (rep.split_prime_sharp) {
            // H <= p^(1/d)  <=>  M^2 <= p^2
            mpq_class t2 = mpq_class(rep.split_prime_sharp->p * rep.split_prime_sharp->p);
            rep.generator_below_sharp_prime = find_generator_below_t2(K, t2, budget);
            rep.thm41_conclusion_ok = rep.generator_below_sharp_prime->generator.has_value();
        }
        rep.delta_cert = delta(K, budget);
        if (rep.split_prime_congruent_1 && rep.delta_cert->height) {
            Ordering c = compare_to_power(*rep.delta_cert->height, mpq_class(25 * rep.abs_disc), 1,
                                          2 * rep.degree);
            rep.delta_le_bound = (c != Ordering::Greater) ? Verdict::Holds : Verdict::Fails;
        }
    }
    return rep;
}

// --------------------------------------------------- family verification

struct FamilyReport {
    unsigned long m = 1, n = 2;
    mpz_class p, q;
    unsigned long d = 2;  // = m n, verified
    bool degree_ok = false;
    bool height_alpha_exact = false;  // H((p/q)^(1/n)) = q^(1/n) exactly
    DiscriminantResult disc_m;        // of the pure field M = Q((p/q)^(1/n))
    bool pq_divides_disc_m = false;   // (pq)^(n-1) | Delta_M
    bool pq_divisibility_on_order_only = false;  // checked against disc(order) when inexact
    std::optional<mpz_class> abs_disc_k;         // exact when available
    mpz_class disc_k_lower = 1, disc_k_upper = 1;  // divisibility bounds otherwise
    CombinationResult gamma;
    Verdict lower_sandwich = Verdict::Undecided;  // (2d)^(-1/2) |Dk|^(1/(2d(n-1))) <= H(gamma)
    Verdict upper_sandwich = Verdict::Undecided;  // H(gamma) <= (2d)^2 |Dk|^(1/(2d(n-1)))
};

namespace pipedetail {

// sandwich comparisons, integerized:
//   lower holds  <=>  |Dk| <= (2d)^(d(n-1)) M^(2(n-1))
//   upper holds  <=>  M^(2(n-1)) <= (2d)^(4d(n-1)) |Dk|
inline Verdict family_lower(const mpz_class& dk, unsigned long d, unsigned long n,
                            const LogHeight& h) {
    mpz_class c = pow_mpz(mpz_class(2 * d), d * (n - 1));
    if (h.exact_mahler()) {
        mpq_class rhs = mpq_class(c) * pow_mpq(*h.exact_mahler(), 2 * (n - 1));
        return mpq_class(dk) <= rhs ? Verdict::Holds : Verdict::Fails;
    }
    for (long w : {96L, 160L, 256L}) {
        unsigned long prec = static_cast<unsigned long>(w) + 32;
        RealEnclosure rhs = log_encl(h.mahler(w), prec) * Dyadic(2 * (n - 1)) +
                            log_of_mpq(mpq_class(c), prec);
        RealEnclosure lhs = log_of_mpq(mpq_class(dk), prec);
        if (certainly_le(lhs, rhs)) return Verdict::Holds;
        if (certainly_lt(rhs, lhs)) return Verdict::Fails;
    }
    return Verdict::Undecided;
}

inline Verdict family_upper(const mpz_class& dk, unsigned long d, unsigned long n,
                            const LogHeight& h) {
    mpz_class c = pow_mpz(mpz_class(2 * d), 4 * d * (n - 1));
    if (h.exact_mahler()) {
        mpq_class lhs = pow_mpq(*h.exact_mahler(), 2 * (n - 1));
        return lhs <= mpq_class(c * dk) ? Verdict::Holds : Verdict::Fails;
    }
    for (long w : {96L, 160L, 256L}) {
        unsigned long prec = static_cast<unsigned long>(w) + 32;
        RealEnclosure lhs = log_encl(h.mahler(w), prec) * Dyadic(2 * (n - 1));
        RealEnclosure rhs = log_of_mpq(mpq_class(c * dk), prec);
        if (certainly_le(lhs, rhs)) return Verdict::Holds;
        if (certainly_lt(rhs, lhs)) return Verdict::Fails;
    }
    return Verdict::Undecided;
}

inline Verdict combine_interval_verdict(Verdict at_lower, Verdict at_upper) {
    if (at_lower == at_upper) return at_lower;
    return Verdict::Undecided;
}

}  // namespace pipedetail

// K = Q(2^(1/m), (p/q)^(1/n)) for primes m < p < q < 2p and n > 1.
inline FamilyReport verify_family(unsigned long m, unsigned long n, const mpz_class& p,
                                  const mpz_class& q, const EnumerationBudget& budget = {}) {
    (void)budget;
    if (n < 2) throw std::invalid_argument("verify_family: n must exceed 1");
    if (m < 1) throw std::invalid_argument("verify_family: m must be positive");
    if (!is_prime_mpz(p).prime || !is_prime_mpz(q).prime)
        throw std::invalid_argument("verify_family: p and q must be prime");
    if (!(mpz_class(m) < p)) throw std::invalid_argument("verify_family: need m < p");
    if (!(p < q)) throw std::invalid_argument("verify_family: need p < q");
    if (!(q < 2 * p)) throw std::invalid_argument("verify_family: need q < 2p");

    FamilyReport rep;
    rep.m = m;
    rep.n = n;
    rep.p = p;
    rep.q = q;

    // alpha = (p/q)^(1/n): minimal polynomial q x^n - p; heights use this
    // model while the field arithmetic uses the monic x^n - p q^(n-1)
    std::vector<mpz_class> fa_coeffs(n + 1, 0);
    fa_coeffs[0] = -p;
    fa_coeffs[n] = q;
    IntPoly f_alpha(std::move(fa_coeffs));
    LogHeight h_alpha = LogHeight::of_algebraic(f_alpha);
    rep.height_alpha_exact = h_alpha.exact_mahler() && *h_alpha.exact_mahler() == mpq_class(q);

    // Delta_M via the isomorphic monic models x^n - p^j q^(n-j), gcd(j, n) = 1
    std::vector<FieldPtr> models;
    for (unsigned long j = 1; j < n; ++j) {
        if (std::gcd(j, n) != 1) continue;
        std::vector<mpz_class> c(n + 1, 0);
        c[0] = -pow_mpz(p, j) * pow_mpz(q, n - j);
        c[n] = 1;
        models.push_back(NumberField::create(IntPoly(std::move(c))));
    }
    rep.disc_m = field_discriminant_multi(models);
    mpz_class pq_pow = pow_mpz(p * q, n - 1);
    if (rep.disc_m.exact) {
        rep.pq_divides_disc_m = mpz_divisible_p(rep.disc_m.value.get_mpz_t(), pq_pow.get_mpz_t());
    } else {
        rep.pq_divisibility_on_order_only = true;
        rep.pq_divides_disc_m =
            mpz_divisible_p(models[0]->defining_disc().get_mpz_t(), pq_pow.get_mpz_t());
    }

    // F-polynomial: x^m - 2 (root 2 for m = 1, i.e. F = Q)
    std::vector<mpz_class> fc(m + 1, 0);
    fc[0] = -2;
    fc[m] = 1;
    IntPoly f_beta(std::move(fc));

    // gamma = a*alpha + b*beta and the compositum degree
    rep.gamma = best_integer_combination(f_alpha, f_beta);
    rep.d = m * n;
    rep.degree_ok = rep.gamma.compositum_degree == static_cast<int>(rep.d);
    if (!rep.degree_ok) return rep;

    // |Delta_K|
    if (m == 1) {
        if (rep.disc_m.exact) rep.abs_disc_k = abs(rep.disc_m.value);
        rep.disc_k_lower = abs(rep.disc_m.value);
        rep.disc_k_upper = abs(rep.disc_m.value);
    } else {
        FieldPtr F = NumberField::create(f_beta);
        DiscriminantResult df = field_discriminant(F);
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), df.value.get_mpz_t(), rep.disc_m.value.get_mpz_t());
        if (df.exact && rep.disc_m.exact && g == 1) {
            // coprime-compositum identity |Dk| = |Df|^n |Dm|^m
            rep.abs_disc_k = pow_mpz(abs(df.value), n) * pow_mpz(abs(rep.disc_m.value), m);
            rep.disc_k_lower = *rep.abs_disc_k;
            rep.disc_k_upper = *rep.abs_disc_k;
        } else {
            // Dm^m | Dk and Df^n | Dk; Dk | disc(minpoly(gamma))
            mpz_class lower;
            mpz_lcm(lower.get_mpz_t(), pow_mpz(abs(rep.disc_m.value), m).get_mpz_t(),
                    pow_mpz(abs(df.value), n).get_mpz_t());
            rep.disc_k_lower = lower;
            FieldPtr Kg = NumberField::from_poly(rep.gamma.minpoly, true);
            rep.disc_k_upper = abs(Kg->defining_disc());
        }
    }

    // sandwich verdicts (interval form when |Delta_K| is only bounded)
    Verdict lo1 = pipedetail::family_lower(rep.disc_k_lower, rep.d, n, rep.gamma.height);
    Verdict lo2 = pipedetail::family_lower(rep.disc_k_upper, rep.d, n, rep.gamma.height);
    rep.lower_sandwich = pipedetail::combine_interval_verdict(lo1, lo2);
    Verdict up1 = pipedetail::family_upper(rep.disc_k_lower, rep.d, n, rep.gamma.height);
    Verdict up2 = pipedetail::family_upper(rep.disc_k_upper, rep.d, n, rep.gamma.height);
    rep.upper_sandwich = pipedetail::combine_interval_verdict(up1, up2);
    return rep;
}

// ---------------------------------------------- coprime compositum check

struct CompositeCheckReport {
    IntPoly f1, f2;
    DiscriminantResult disc1, disc2;
    bool in_hypothesis = false;  // both discriminants exact and coprime
    int compositum_degree = 0;
    bool degree_ok = false;  // compositum degree = d1 * d2
    mpz_class identity_value;  // |D1|^(d2) |D2|^(d1)
    std::optional<DiscriminantResult> compositum_disc;
    std::optional<bool> identity_matches;
    bool height_bound_ok = false;  // H(a1 + a2) <= 2 d^2 H(a1) H(a2)
};

inline CompositeCheckReport composite_coprime_check(const IntPoly& f1, const IntPoly& f2) {
    CompositeCheckReport rep;
    rep.f1 = f1.primitive_part();
    rep.f2 = f2.primitive_part();
    if (!is_irreducible_q(rep.f1) || !is_irreducible_q(rep.f2))
        throw std::invalid_argument("composite_coprime_check: inputs must be irreducible");
    FieldPtr K1 = NumberField::from_poly(rep.f1, true);
    FieldPtr K2 = NumberField::from_poly(rep.f2, true);
    rep.disc1 = field_discriminant(K1);
    rep.disc2 = field_discriminant(K2);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), rep.disc1.value.get_mpz_t(), rep.disc2.value.get_mpz_t());
    rep.in_hypothesis = rep.disc1.exact && rep.disc2.exact && g == 1;

    const int d1 = rep.f1.degree(), d2 = rep.f2.degree();
    IntPoly comp = minpoly_of_combination(rep.f1, rep.f2, 1, 1, true);
    rep.compositum_degree = comp.degree();
    rep.degree_ok = comp.degree() == d1 * d2;
    rep.identity_value = pow_mpz(abs(rep.disc1.value), static_cast<unsigned long>(d2)) *
                         pow_mpz(abs(rep.disc2.value), static_cast<unsigned long>(d1));

    if (rep.in_hypothesis && rep.degree_ok) {
        // try a few combination models for an exact compositum discriminant
        std::vector<FieldPtr> models{NumberField::from_poly(comp, true)};
        for (auto [a, b] : {std::pair<int, int>{1, 2}, {2, 1}, {1, 3}}) {
            IntPoly mm = minpoly_of_combination(rep.f1, rep.f2, a, b, true);
            if (mm.degree() == d1 * d2) models.push_back(NumberField::from_poly(mm, true));
        }
        DiscriminantResult dk = field_discriminant_multi(models);
        rep.compositum_disc = dk;
        if (dk.exact) rep.identity_matches = (abs(dk.value) == rep.identity_value);
    }

    // H(alpha1 + alpha2) <= 2 d^2 H(alpha1) H(alpha2)
    LogHeight hg = LogHeight::of_algebraic(comp, true);
    LogHeight h1 = LogHeight::of_algebraic(rep.f1, true);
    LogHeight h2 = LogHeight::of_algebraic(rep.f2, true);
    mpq_class c2d2(2 * static_cast<unsigned long>(rep.compositum_degree) *
                   static_cast<unsigned long>(rep.compositum_degree));
    if (hg.exact_mahler() && h1.exact_mahler() && h2.exact_mahler()) {
        unsigned long dg = static_cast<unsigned long>(comp.degree());
        unsigned long L = std::lcm(std::lcm(static_cast<unsigned long>(d1),
                                            static_cast<unsigned long>(d2)),
                                   dg);
        mpq_class lhs = pow_mpq(*hg.exact_mahler(), L / dg);
        mpq_class rhs = pow_mpq(c2d2, L) * pow_mpq(*h1.exact_mahler(), L / d1) *
                        pow_mpq(*h2.exact_mahler(), L / d2);
        rep.height_bound_ok = lhs <= rhs;
    } else {
        for (long w : {96L, 256L}) {
            unsigned long prec = static_cast<unsigned long>(w) + 32;
            RealEnclosure lhs = hg.log_value(w);
            RealEnclosure rhs = h1.log_value(w) + h2.log_value(w) + log_of_mpq(c2d2, prec);
            if (certainly_le(lhs, rhs)) {
                rep.height_bound_ok = true;
                break;
            }
            if (certainly_lt(rhs, lhs)) break;
        }
    }
    return rep;
}

}  // namespace smallgen
