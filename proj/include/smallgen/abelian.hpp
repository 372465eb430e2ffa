#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "smallgen/dyadic.hpp"
#include "smallgen/factorq.hpp"
#include "smallgen/intpoly.hpp"
#include "smallgen/zutil.hpp"

namespace smallgen {

// Abelian number field given as (modulus f, subgroup H <= (Z/fZ)^*): the
// fixed field of H acting on the f-th cyclotomic field.  Degree is
// phi(f)/|H|.

struct AbelianSpec {
    unsigned long modulus = 1;
    std::vector<unsigned long> subgroup_gens;
    std::vector<unsigned long> subgroup;  // expanded closure, sorted, contains 1
    unsigned long degree = 1;             // phi(f)/|H|
};

inline std::vector<unsigned long> units_mod(unsigned long f) {
    std::vector<unsigned long> u;
    if (f == 1) return {1};
    for (unsigned long a = 1; a < f; ++a)
        if (std::gcd(a, f) == 1) u.push_back(a);
    return u;
}

inline std::vector<unsigned long> subgroup_expand(unsigned long f,
                                                  const std::vector<unsigned long>& gens) {
    if (f == 0) throw std::invalid_argument("subgroup_expand: modulus must be positive");
    if (f == 1) return {1};
    for (unsigned long g : gens) {
        if (std::gcd(g % f, f) != 1)
            throw std::invalid_argument("subgroup_expand: generator not coprime to modulus");
    }
    // multiplicative closure
    std::vector<unsigned long> frontier{1};
    std::set<unsigned long> seen{1};
    while (!frontier.empty()) {
        std::vector<unsigned long> next;
        for (unsigned long x : frontier) {
            for (unsigned long g : gens) {
                unsigned long y = static_cast<unsigned long>(
                    (static_cast<u64>(x) * (g % f)) % f);
                if (seen.insert(y).second) next.push_back(y);
            }
        }
        frontier = std::move(next);
    }
    return std::vector<unsigned long>(seen.begin(), seen.end());
}

inline AbelianSpec make_abelian_spec(unsigned long f, const std::vector<unsigned long>& gens) {
    AbelianSpec s;
    s.modulus = f;
    s.subgroup_gens = gens;
    s.subgroup = subgroup_expand(f, gens);
    unsigned long phi = (f <= 2) ? 1 : static_cast<unsigned long>(euler_phi(mpz_class(f)).get_ui());
    if (f == 1 || f == 2) phi = 1;
    if (phi % s.subgroup.size() != 0)
        throw consistency_error("make_abelian_spec: |H| does not divide phi(f)");
    s.degree = phi / s.subgroup.size();
    return s;
}

// -------------------------------------------------------------- unit group

struct UnitGroup {
    unsigned long modulus = 1;
    std::vector<unsigned long> gens;
    std::vector<unsigned long> orders;                    // gens[i] has order orders[i]
    std::map<unsigned long, std::vector<unsigned long>> dlog;  // unit -> exponent vector
    unsigned long order = 1;                              // phi(f)
};

namespace abeliandetail {

inline unsigned long pow_mod_ul(unsigned long b, unsigned long e, unsigned long m) {
    return static_cast<unsigned long>(powmod_u64(b % m, e, m));
}

inline unsigned long primitive_root_mod_pk(unsigned long p, unsigned e) {
    // primitive root mod p, adjusted so it stays primitive mod p^e
    unsigned long phi_p = p - 1;
    auto fac = factor_mpz(mpz_class(phi_p));
    unsigned long r = 2;
    for (;; ++r) {
        bool ok = true;
        for (auto& [q, mult] : fac) {
            (void)mult;
            if (pow_mod_ul(r, phi_p / q.get_ui(), p) == 1) { ok = false; break; }
        }
        if (ok) break;
    }
    if (e == 1) return r;
    unsigned long p2 = p * p;
    if (pow_mod_ul(r, p - 1, p2) == 1) r += p;
    return r;
}

// CRT lift: x = a mod m, x = 1 mod (f/m), gcd(m, f/m) = 1
inline unsigned long crt_lift(unsigned long a, unsigned long m, unsigned long f) {
    unsigned long n = f / m;
    if (n == 1) return a % f;
    mpz_class mi;  // m^{-1} mod n
    mpz_class mm(m), nn(n);
    if (mpz_invert(mi.get_mpz_t(), mm.get_mpz_t(), nn.get_mpz_t()) == 0)
        throw consistency_error("crt_lift: moduli not coprime");
    // x = a + m * ((1 - a) * m^{-1} mod n)
    mpz_class t = ((1 - mpz_class(a)) * mi) % nn;
    if (t < 0) t += nn;
    mpz_class x = (mpz_class(a) + mm * t) % mpz_class(f);
    return x.get_ui();
}

}  // namespace abeliandetail

inline UnitGroup unit_group(unsigned long f) {
    UnitGroup G;
    G.modulus = f;
    if (f <= 2) {
        G.order = 1;
        G.dlog[1] = {};
        return G;
    }
    auto fac = factor_mpz(mpz_class(f));
    for (auto& [pz, e] : fac) {
        unsigned long p = pz.get_ui();
        unsigned long pe = 1;
        for (unsigned i = 0; i < e; ++i) pe *= p;
        if (p == 2) {
            if (e == 1) continue;
            if (e == 2) {
                G.gens.push_back(abeliandetail::crt_lift(3, 4, f));
                G.orders.push_back(2);
            } else {
                G.gens.push_back(abeliandetail::crt_lift(pe - 1, pe, f));
                G.orders.push_back(2);
                G.gens.push_back(abeliandetail::crt_lift(5, pe, f));
                G.orders.push_back(pe / 4);
            }
        } else {
            unsigned long r = abeliandetail::primitive_root_mod_pk(p, e) % pe;
            G.gens.push_back(abeliandetail::crt_lift(r, pe, f));
            G.orders.push_back(pe - pe / p);
        }
    }
    G.order = 1;
    for (unsigned long n : G.orders) G.order *= n;
    // full discrete-log table by odometer enumeration
    std::vector<unsigned long> expn(G.gens.size(), 0);
    while (true) {
        u64 v = 1;
        for (size_t i = 0; i < G.gens.size(); ++i)
            v = v * powmod_u64(G.gens[i], expn[i], f) % f;
        G.dlog[static_cast<unsigned long>(v)] = expn;
        size_t i = 0;
        for (; i < expn.size(); ++i) {
            if (++expn[i] < G.orders[i]) break;
            expn[i] = 0;
        }
        if (i == expn.size()) break;
        if (G.gens.empty()) break;
    }
    if (G.dlog.size() != G.order) throw consistency_error("unit_group: dlog table incomplete");
    return G;
}

// --------------------------------------------------------- character table

struct DirichletCharacter {
    std::vector<unsigned long> exponents;  // e_i on the unit-group generators
    unsigned long conductor = 1;
    bool principal = false;
};

struct CharacterTable {
    unsigned long modulus = 1;
    UnitGroup units;
    std::vector<DirichletCharacter> chars;  // exactly degree many, lexicographic
};

namespace abeliandetail {

// chi value as an exponent of the primitive N-th root of unity; N = lcm(orders)
inline unsigned long char_exponent(const UnitGroup& G, const std::vector<unsigned long>& t,
                                   unsigned long N, unsigned long u) {
    const auto& dl = G.dlog.at(u);
    u64 acc = 0;
    for (size_t i = 0; i < t.size(); ++i)
        acc = (acc + static_cast<u64>(t[i]) % N * (dl[i] % N) % N * (N / G.orders[i])) % N;
    return static_cast<unsigned long>(acc);
}

inline bool char_trivial_on(const UnitGroup& G, const std::vector<unsigned long>& t,
                            unsigned long N, const std::vector<unsigned long>& H) {
    for (unsigned long h : H)
        if (char_exponent(G, t, N, h) != 0) return false;
    return true;
}

inline unsigned long char_conductor(const UnitGroup& G, const std::vector<unsigned long>& t,
                                    unsigned long N) {
    unsigned long f = G.modulus;
    for (const mpz_class& mz : divisors_of(mpz_class(f))) {
        unsigned long m = mz.get_ui();
        // chi factors through (Z/m)^* iff chi(u) = 1 for all u = 1 mod m
        bool ok = true;
        for (unsigned long u = 1; u < f && ok; u += m)
            if (std::gcd(u, f) == 1 && char_exponent(G, t, N, u) != 0) ok = false;
        if (ok) return m;
    }
    return f;
}

}  // namespace abeliandetail

inline CharacterTable character_group(const AbelianSpec& spec) {
    CharacterTable T;
    T.modulus = spec.modulus;
    T.units = unit_group(spec.modulus);
    const UnitGroup& G = T.units;
    unsigned long N = 1;
    for (unsigned long n : G.orders) N = std::lcm(N, n);
    if (N == 0) N = 1;

    std::vector<unsigned long> t(G.gens.size(), 0);
    while (true) {
        if (abeliandetail::char_trivial_on(G, t, N, spec.subgroup)) {
            DirichletCharacter chi;
            chi.exponents = t;
            chi.principal = std::all_of(t.begin(), t.end(), [](unsigned long x) { return x == 0; });
            chi.conductor = chi.principal ? 1 : abeliandetail::char_conductor(G, t, N);
            T.chars.push_back(std::move(chi));
        }
        if (t.empty()) break;  // trivial unit group: the principal character only
        size_t i = 0;
        for (; i < t.size(); ++i) {
            if (++t[i] < G.orders[i]) break;
            t[i] = 0;
        }
        if (i == t.size()) break;
    }
    if (T.chars.size() != spec.degree)
        throw consistency_error("character_group: character count != degree");
    std::sort(T.chars.begin(), T.chars.end(),
              [](const DirichletCharacter& a, const DirichletCharacter& b) {
                  return a.exponents < b.exponents;
              });
    return T;
}

// Conductor-discriminant formula: |Delta_K| = prod over characters of f(chi).
inline mpz_class conductor_discriminant(const AbelianSpec& spec) {
    auto T = character_group(spec);
    mpz_class d = 1;
    for (const auto& chi : T.chars) d *= mpz_class(chi.conductor);
    return d;
}

struct ConductorResult {
    unsigned long conductor = 1;
    AbelianSpec minimized;     // equivalent spec at the true conductor
    mpz_class abs_disc;        // |Delta_K| from the conductor-discriminant formula
    bool conductor_bound_ok;   // f <= |Delta|^(2/d), checked as f^d <= Delta^2
};

inline ConductorResult field_conductor(const AbelianSpec& spec) {
    auto T = character_group(spec);
    ConductorResult out;
    unsigned long ff = 1;
    mpz_class disc = 1;
    for (const auto& chi : T.chars) {
        ff = std::lcm(ff, chi.conductor);
        disc *= mpz_class(chi.conductor);
    }
    out.conductor = ff;
    out.abs_disc = disc;
    if (ff == spec.modulus) {
        out.minimized = spec;
    } else {
        // restrict H to (Z/ff)^*
        std::set<unsigned long> h2;
        for (unsigned long h : spec.subgroup) h2.insert(ff == 1 ? 1 : h % ff);
        AbelianSpec m;
        m.modulus = ff;
        m.subgroup_gens.assign(h2.begin(), h2.end());
        m.subgroup = subgroup_expand(ff, m.subgroup_gens);
        unsigned long phi = (ff <= 2) ? 1 : euler_phi(mpz_class(ff)).get_ui();
        if (phi % m.subgroup.size() != 0 || phi / m.subgroup.size() != spec.degree)
            throw consistency_error("field_conductor: minimized spec degree mismatch");
        m.degree = spec.degree;
        out.minimized = std::move(m);
    }
    // f <= |Delta|^(2/d)  <=>  f^d <= Delta^2 (exact integers)
    mpz_class lhs = pow_mpz(mpz_class(ff), spec.degree);
    out.conductor_bound_ok = lhs <= disc * disc;
    return out;
}

// The sharp splitting criterion for an abelian field: an unramified prime
// splits completely iff its residue lies in H.  (p = 1 mod f is the
// classical sufficient case.)  Returns false when p divides the modulus.
inline bool splits_completely_abelian(const AbelianSpec& spec, const mpz_class& p) {
    if (!is_prime_mpz(p).prime) throw std::invalid_argument("splits_completely_abelian: p not prime");
    if (spec.modulus == 1) return true;
    if (mpz_divisible_ui_p(p.get_mpz_t(), spec.modulus)) return false;
    unsigned long r = mpz_fdiv_ui(p.get_mpz_t(), spec.modulus);
    return std::binary_search(spec.subgroup.begin(), spec.subgroup.end(), r);
}

// ------------------------------------------------- Gaussian period polynomial

// Minimal polynomial of the Gaussian period sum_{h in H} zeta_f^h at the
// true conductor: evaluate the degree-many conjugate periods as certified
// complex boxes, form the monic product, and round each coefficient to the
// unique enclosed integer (certified error < 1/2).  Verified irreducible of
// the right degree.  If the plain period degenerates (possible for some
// composite conductors), deterministic weighted traces
// sum_h sum_i t^(i-1) zeta^(c h i) are tried instead.
inline IntPoly defining_polynomial(const AbelianSpec& spec0, unsigned first_attempt = 0,
                                   unsigned* used_attempt = nullptr) {
    auto fc = field_conductor(spec0);
    const AbelianSpec& spec = fc.minimized;
    const unsigned long f = spec.modulus;
    const unsigned long d = spec.degree;
    if (f == 1) return IntPoly{-1, 1};  // period = 1
    if (f == 2) return IntPoly{1, 1};   // period = -1

    // coset representatives of H in (Z/f)^*
    std::vector<unsigned long> units = units_mod(f);
    std::set<unsigned long> assigned;
    std::vector<unsigned long> reps;
    for (unsigned long u : units) {
        if (assigned.count(u)) continue;
        reps.push_back(u);
        for (unsigned long h : spec.subgroup)
            assigned.insert(static_cast<unsigned long>(static_cast<u64>(u) * h % f));
    }
    if (reps.size() != d) throw consistency_error("defining_polynomial: coset count != degree");

    for (unsigned attempt = first_attempt; attempt < first_attempt + 40; ++attempt) {
        // attempt 0: the classical period; later attempts sum L powers with
        // weights t^(i-1)
        unsigned long L = attempt == 0 ? 1 : std::min<unsigned long>(f - 1, 2 + attempt / 4);
        unsigned long t = attempt + 1;

        unsigned long prec = 128 + f * d + 16 * L;
        for (; prec <= (1ul << 16); prec *= 2) {
            RealEnclosure two_pi = pi_encl(prec) * Dyadic(2);
            std::vector<ComplexBox> periods;
            periods.reserve(d);
            for (unsigned long c : reps) {
                ComplexBox acc(RealEnclosure::point(Dyadic(0)), RealEnclosure::point(Dyadic(0)));
                for (unsigned long h : spec.subgroup) {
                    mpz_class w = 1;
                    for (unsigned long i = 1; i <= L; ++i) {
                        unsigned long k = static_cast<unsigned long>(
                            static_cast<u64>(c) % f * (h % f) % f * (i % f) % f);
                        mpq_class frac(k, f);
                        frac.canonicalize();
                        RealEnclosure ang = two_pi * RealEnclosure::of_mpq(frac, prec);
                        ComplexBox term(cos_encl(ang, prec), sin_encl(ang, prec));
                        acc = acc + term * Dyadic(w);
                        w *= t;
                    }
                }
                periods.push_back(acc.rounded(prec));
            }
            // monic product of (x - period_j)
            std::vector<ComplexBox> poly{ComplexBox::point(Dyadic(1), Dyadic(0))};
            for (const auto& eta : periods) {
                std::vector<ComplexBox> next(poly.size() + 1,
                                             ComplexBox::point(Dyadic(0), Dyadic(0)));
                for (size_t i = 0; i < poly.size(); ++i) {
                    next[i + 1] = (next[i + 1] + poly[i]).rounded(prec);
                    next[i] = (next[i] - poly[i] * eta).rounded(prec);
                }
                poly = std::move(next);
            }
            // round coefficients to certified integers
            std::vector<mpz_class> coeffs(poly.size());
            bool ok = true;
            for (size_t i = 0; i < poly.size() && ok; ++i) {
                const ComplexBox& b = poly[i];
                if (!b.im.contains_zero())
                    throw consistency_error("defining_polynomial: non-real coefficient");
                mpq_class lo = b.re.lo.to_mpq(), hi = b.re.hi.to_mpq();
                mpz_class ilo, ihi;
                mpz_cdiv_q(ilo.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
                mpz_fdiv_q(ihi.get_mpz_t(), hi.get_num().get_mpz_t(), hi.get_den().get_mpz_t());
                if (ilo != ihi) { ok = false; break; }  // not pinned to one integer
                coeffs[i] = ilo;
            }
            if (!ok) continue;  // escalate precision
            IntPoly g(std::move(coeffs));
            if (g.degree() != static_cast<int>(d)) break;  // degenerate: next attempt
            if (d > 1 && !is_irreducible_q(g)) break;      // degenerate: next attempt
            if (used_attempt) *used_attempt = attempt;
            return g;
        }
    }
    throw precision_error("defining_polynomial: no generating trace found");
}

// Several distinct monic models of the same abelian field (successive
// generating traces); used to certify the field discriminant when a single
// power basis leaves primes undecided.
inline std::vector<IntPoly> defining_polynomial_variants(const AbelianSpec& spec,
                                                         unsigned max_variants = 4) {
    std::vector<IntPoly> out;
    unsigned attempt = 0;
    while (out.size() < max_variants && attempt < 24) {
        unsigned used = attempt;
        IntPoly g;
        try {
            g = defining_polynomial(spec, attempt, &used);
        } catch (const precision_error&) {
            break;
        }
        bool dup = false;
        for (const auto& h : out) dup = dup || h == g;
        if (!dup) out.push_back(g);
        attempt = used + 1;
        if (g.degree() == 1) break;
    }
    return out;
}

// All subgroups of (Z/fZ)^*, each as a sorted element list (closure search
// over generated subgroups; fine for the desk-scale moduli used here).
inline std::vector<std::vector<unsigned long>> enumerate_subgroups(unsigned long f) {
    std::vector<unsigned long> units = units_mod(f);
    std::set<std::vector<unsigned long>> found;
    std::vector<std::vector<unsigned long>> queue{subgroup_expand(f, {})};
    found.insert(queue[0]);
    while (!queue.empty()) {
        auto S = queue.back();
        queue.pop_back();
        for (unsigned long u : units) {
            if (std::binary_search(S.begin(), S.end(), u)) continue;
            std::vector<unsigned long> gens = S;
            gens.push_back(u);
            auto T = subgroup_expand(f, gens);
            if (found.insert(T).second) queue.push_back(T);
        }
    }
    return std::vector<std::vector<unsigned long>>(found.begin(), found.end());
}

// Canonical abelian presentation of the quadratic field Q(sqrt(m)):
// modulus |disc|, subgroup the kernel of the Kronecker character.
inline AbelianSpec quadratic_abelian_spec(const mpz_class& m) {
    if (m == 0 || m == 1 || !is_squarefree(m))
        throw std::invalid_argument("quadratic_abelian_spec: m must be squarefree, != 0, 1");
    mpz_class disc = (((m - 1) % 4) == 0) ? m : 4 * m;
    unsigned long f = mpz_class(abs(disc)).get_ui();
    std::vector<unsigned long> gens;
    for (unsigned long a : units_mod(f))
        if (kronecker(disc, mpz_class(a)) == 1) gens.push_back(a);
    return make_abelian_spec(f, gens);
}

}  // namespace smallgen
