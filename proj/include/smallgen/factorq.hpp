#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "smallgen/intpoly.hpp"
#include "smallgen/modpoly.hpp"

namespace smallgen {

// Factorization over Q: content times primitive irreducible factors with
// multiplicities.  Pipeline: squarefree decomposition, factorization modulo
// a good small prime (picked to minimize the modular factor count), Hensel
// lifting, subset recombination.

struct QFactorization {
    mpz_class content = 1;  // signed
    std::vector<std::pair<IntPoly, int>> factors;

    IntPoly product() const {
        IntPoly acc = IntPoly::constant(content);
        for (const auto& [f, m] : factors)
            for (int i = 0; i < m; ++i) acc = acc * f;
        return acc;
    }
};

namespace detail {

// ---- arithmetic mod m (m = p^a), symmetric lift at the end ----

inline mpz_class mod_m(const mpz_class& a, const mpz_class& m) {
    mpz_class r = a % m;
    if (r < 0) r += m;
    return r;
}

inline IntPoly poly_mod(const IntPoly& f, const mpz_class& m) {
    std::vector<mpz_class> c(f.coeffs());
    for (auto& x : c) x = mod_m(x, m);
    return IntPoly(std::move(c));
}

inline IntPoly poly_mulmod(const IntPoly& a, const IntPoly& b, const mpz_class& m) {
    return poly_mod(a * b, m);
}

// symmetric representative in (-m/2, m/2]
inline IntPoly poly_symmetric(const IntPoly& f, const mpz_class& m) {
    std::vector<mpz_class> c(f.coeffs());
    mpz_class half = m / 2;
    for (auto& x : c) {
        x = mod_m(x, m);
        if (x > half) x -= m;
    }
    return IntPoly(std::move(c));
}

// division with remainder mod m by a monic divisor
inline void poly_divrem_monic_mod(const IntPoly& a, const IntPoly& b, const mpz_class& m,
                                  IntPoly& q, IntPoly& r) {
    if (!b.is_monic()) throw consistency_error("poly_divrem_monic_mod: divisor not monic");
    std::vector<mpz_class> rem(a.coeffs());
    int db = b.degree();
    int dq = a.degree() - db;
    std::vector<mpz_class> qq(dq >= 0 ? static_cast<size_t>(dq) + 1 : 0, 0);
    for (int k = dq; k >= 0; --k) {
        mpz_class c = mod_m(rem[static_cast<size_t>(k + db)], m);
        qq[static_cast<size_t>(k)] = c;
        if (c == 0) continue;
        for (int i = 0; i <= db; ++i)
            rem[static_cast<size_t>(k + i)] = mod_m(rem[static_cast<size_t>(k + i)] - c * b.coeff(i), m);
    }
    for (auto& x : rem) x = mod_m(x, m);
    q = IntPoly(std::move(qq));
    r = IntPoly(std::move(rem));
    // remainder has degree < db by construction
}

// extended Euclid over F_p: s*a + t*b = 1 (a, b coprime mod p)
inline void mp_ext_gcd(const ModPoly& a, const ModPoly& b, u64 p, ModPoly& s, ModPoly& t) {
    ModPoly r0 = a, r1 = b;
    ModPoly s0 = mp_one(), s1{};
    ModPoly t0{}, t1 = mp_one();
    while (!r1.is_zero()) {
        ModPoly q, r;
        mp_divrem(r0, r1, p, q, r);
        ModPoly s2 = mp_sub(s0, mp_mul(q, s1, p), p);
        ModPoly t2 = mp_sub(t0, mp_mul(q, t1, p), p);
        r0 = std::move(r1); r1 = std::move(r);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (r0.degree() != 0) throw consistency_error("mp_ext_gcd: inputs not coprime");
    u64 inv = mp_invmod(r0.c[0], p);
    s = mp_scale(s0, inv, p);
    t = mp_scale(t0, inv, p);
}

// One quadratic Hensel step m -> m^2 (von zur Gathen & Gerhard, 15.10).
// Invariants: f = g*h mod m, s*g + t*h = 1 mod m, f and h monic, g monic.
inline void hensel_step(const IntPoly& f, IntPoly& g, IntPoly& h, IntPoly& s, IntPoly& t,
                        const mpz_class& m) {
    mpz_class m2 = m * m;
    IntPoly e = poly_mod(f - g * h, m2);
    IntPoly q, r;
    poly_divrem_monic_mod(poly_mulmod(s, e, m2), h, m2, q, r);
    IntPoly g1 = poly_mod(g + t * e + q * g, m2);
    IntPoly h1 = poly_mod(h + r, m2);
    IntPoly b = poly_mod(s * g1 + t * h1 - IntPoly{1}, m2);
    IntPoly c, d;
    poly_divrem_monic_mod(poly_mulmod(s, b, m2), h1, m2, c, d);
    IntPoly s1 = poly_mod(s - d, m2);
    IntPoly t1 = poly_mod(t - t * b - c * g1, m2);
    g = std::move(g1);
    h = std::move(h1);
    s = std::move(s1);
    t = std::move(t1);
}

// Lift the monic factorization f = prod(fac) mod p to mod p^a (tree lifting).
inline void hensel_lift_tree(const IntPoly& f, const std::vector<ModPoly>& fac, size_t lo,
                             size_t hi, u64 p, const mpz_class& target,
                             std::vector<IntPoly>& out) {
    if (hi - lo == 1) {
        out.push_back(poly_mod(f, target));
        return;
    }
    size_t mid = lo + (hi - lo) / 2;
    ModPoly u0 = mp_one(), v0 = mp_one();
    for (size_t i = lo; i < mid; ++i) u0 = mp_mul(u0, fac[i], p);
    for (size_t i = mid; i < hi; ++i) v0 = mp_mul(v0, fac[i], p);
    ModPoly s0, t0;
    mp_ext_gcd(u0, v0, p, s0, t0);
    IntPoly g = mp_lift(u0), h = mp_lift(v0), s = mp_lift(s0), t = mp_lift(t0);
    mpz_class m(static_cast<unsigned long>(p));
    while (m < target) {
        hensel_step(f, g, h, s, t, m);
        m = m * m;
    }
    g = poly_mod(g, target);
    h = poly_mod(h, target);
    hensel_lift_tree(g, fac, lo, mid, p, target, out);
    hensel_lift_tree(h, fac, mid, hi, p, target, out);
}

// Mignotte-style bound on |coefficients| of any monic factor of monic G.
inline mpz_class factor_coeff_bound(const IntPoly& g) {
    mpz_class norm2sq = 0;
    for (const auto& a : g.coeffs()) norm2sq += a * a;
    mpz_class norm2 = isqrt(norm2sq) + 1;
    return (norm2 + abs(g.lead())) << static_cast<unsigned>(g.degree());
}

// Factor a primitive squarefree monic polynomial of degree >= 2.
inline std::vector<IntPoly> factor_monic_squarefree(const IntPoly& g0) {
    // prime selection: g must stay squarefree mod p; keep the prime with the
    // fewest modular factors among a handful of candidates
    static const u64 kPrimes[] = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                  37, 41, 43, 47, 53, 59, 61, 67, 71, 73};
    u64 best_p = 0;
    ModFactorization best;
    int tried = 0;
    for (u64 p : kPrimes) {
        ModPoly fp = mp_reduce(g0, p);
        if (fp.degree() != g0.degree()) continue;
        if (mp_gcd(fp, mp_derivative(fp, p), p).degree() != 0) continue;
        ModFactorization fac = factor_mod_p(g0, p);
        if (fac.factors.size() == 1) return {g0};  // irreducible certificate
        if (best_p == 0 || fac.factors.size() < best.factors.size()) {
            best_p = p;
            best = std::move(fac);
        }
        if (++tried >= 6) break;
    }
    if (best_p == 0) throw consistency_error("factor_monic_squarefree: no usable prime < 74");

    // Hensel lift to p^a beyond twice the factor coefficient bound
    mpz_class bound = factor_coeff_bound(g0);
    mpz_class target(static_cast<unsigned long>(best_p));
    while (target <= 2 * bound) target *= static_cast<unsigned long>(best_p);

    std::vector<ModPoly> base;
    base.reserve(best.factors.size());
    for (auto& f : best.factors) base.push_back(f.poly);
    std::vector<IntPoly> lifted;
    hensel_lift_tree(poly_mod(g0, target), base, 0, base.size(), best_p, target, lifted);

    // subset recombination
    std::vector<IntPoly> result;
    std::vector<size_t> live(lifted.size());
    for (size_t i = 0; i < live.size(); ++i) live[i] = i;
    IntPoly rest = g0;

    auto try_subset = [&](const std::vector<size_t>& subset) -> bool {
        IntPoly cand = IntPoly{1};
        for (size_t idx : subset) cand = poly_mulmod(cand, lifted[live[idx]], target);
        cand = poly_symmetric(cand, target);
        // quick test: constant term must divide rest's constant term
        if (rest.coeff(0) != 0) {
            if (cand.coeff(0) == 0) return false;
            if (!mpz_divisible_p(rest.coeff(0).get_mpz_t(), cand.coeff(0).get_mpz_t())) return false;
        }
        auto q = try_divide(rest, cand);
        if (!q) return false;
        result.push_back(cand);
        rest = *q;
        std::vector<size_t> nl;
        for (size_t i = 0, j = 0; i < live.size(); ++i) {
            if (j < subset.size() && subset[j] == i) { ++j; continue; }
            nl.push_back(live[i]);
        }
        live = std::move(nl);
        return true;
    };

    size_t s = 1;
    while (2 * s <= live.size()) {
        // iterate s-subsets of indices into `live` in lexicographic order
        std::vector<size_t> idx(s);
        for (size_t i = 0; i < s; ++i) idx[i] = i;
        bool found = false;
        while (true) {
            if (try_subset(idx)) { found = true; break; }
            // next combination
            size_t i = s;
            while (i-- > 0) {
                if (idx[i] != i + live.size() - s) {
                    ++idx[i];
                    for (size_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
                    break;
                }
                if (i == 0) { i = SIZE_MAX; break; }
            }
            if (i == SIZE_MAX) break;
        }
        if (!found) ++s;  // no factor uses s modular pieces
    }
    if (rest.degree() > 0) result.push_back(rest);
    return result;
}

inline std::vector<IntPoly> factor_squarefree_primitive(const IntPoly& g);

// rational-root splitting for cubics; divisors of the constant over
// divisors of the lead
inline std::vector<IntPoly> factor_cubic(const IntPoly& g) {
    for (const mpz_class& qd : divisors_of(g.lead())) {
        for (const mpz_class& pd : divisors_of(g.coeff(0) == 0 ? mpz_class(1) : g.coeff(0))) {
            for (int sign : {1, -1}) {
                mpq_class r(sign * pd, qd);
                r.canonicalize();
                if (g.eval_mpq(r) == 0) {
                    IntPoly lin({-r.get_num(), r.get_den()});
                    IntPoly linp = lin.primitive_part();
                    IntPoly rest = divexact(g, linp).primitive_part();
                    std::vector<IntPoly> out{linp};
                    for (auto& f : factor_squarefree_primitive(rest)) out.push_back(f);
                    return out;
                }
            }
        }
    }
    return {g};
}

// Factor a primitive squarefree polynomial into primitive irreducibles.
inline std::vector<IntPoly> factor_squarefree_primitive(const IntPoly& g) {
    int d = g.degree();
    if (d <= 0) return {};
    if (d == 1) return {g};
    if (g.coeff(0) == 0) {  // x divides
        std::vector<mpz_class> c(g.coeffs().begin() + 1, g.coeffs().end());
        std::vector<IntPoly> out{IntPoly({0, 1})};
        for (auto& f : factor_squarefree_primitive(IntPoly(std::move(c)).primitive_part()))
            out.push_back(f);
        return out;
    }
    if (d == 2) {
        mpz_class disc = g.coeff(1) * g.coeff(1) - 4 * g.coeff(2) * g.coeff(0);
        if (!is_perfect_square(disc)) return {g};
        mpz_class s = isqrt(disc);
        mpq_class r1(-g.coeff(1) + s, 2 * g.coeff(2));
        mpq_class r2(-g.coeff(1) - s, 2 * g.coeff(2));
        r1.canonicalize();
        r2.canonicalize();
        IntPoly f1 = IntPoly({-r1.get_num(), r1.get_den()}).primitive_part();
        IntPoly f2 = IntPoly({-r2.get_num(), r2.get_den()}).primitive_part();
        return {f1, f2};
    }
    if (d == 3) return factor_cubic(g);

    if (g.is_monic()) {
        auto out = factor_monic_squarefree(g);
        for (auto& f : out) f = f.primitive_part();
        return out;
    }
    // monicize: y = lead * x, factor, map back via f(lead x)
    const mpz_class& L = g.lead();
    IntPoly gm = scale_roots(g, L);  // monic after dividing the content
    mpz_class cont = gm.content();
    std::vector<mpz_class> c(gm.coeffs());
    for (auto& x : c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), cont.get_mpz_t());
    gm = IntPoly(std::move(c));
    if (!gm.is_monic()) throw consistency_error("factor: monicization failed");
    auto monic_factors = factor_monic_squarefree(gm);
    std::vector<IntPoly> out;
    out.reserve(monic_factors.size());
    for (auto& h : monic_factors) {
        // roots of h are L * (roots of a factor of g); substitute x -> L*x
        out.push_back(compose_scale(h, L).primitive_part());
    }
    return out;
}

}  // namespace detail

inline QFactorization factor_over_q(const IntPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("factor_over_q: zero polynomial");
    QFactorization out;
    auto sf = squarefree_decomposition(f);
    out.content = sf.unit;
    for (auto& [part, mult] : sf.parts) {
        for (auto& irr : detail::factor_squarefree_primitive(part)) {
            out.factors.emplace_back(irr, mult);
        }
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
    // merge equal factors
    std::vector<std::pair<IntPoly, int>> merged;
    for (auto& fm : out.factors) {
        if (!merged.empty() && merged.back().first == fm.first)
            merged.back().second += fm.second;
        else
            merged.push_back(fm);
    }
    out.factors = std::move(merged);
    return out;
}

inline bool is_irreducible_q(const IntPoly& f) {
    if (f.degree() < 1) return false;
    if (f.degree() == 1) return true;
    if (!is_squarefree_poly(f)) return false;
    auto fac = factor_over_q(f);
    return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

}  // namespace smallgen
