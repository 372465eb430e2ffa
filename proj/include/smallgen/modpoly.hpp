#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "smallgen/intpoly.hpp"
#include "smallgen/zutil.hpp"

namespace smallgen {

// Polynomials over F_p for word-sized primes p < 2^62, constant term
// first, coefficients reduced to [0, p).

struct ModPoly {
    std::vector<u64> c;

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    bool is_one() const { return c.size() == 1 && c[0] == 1; }
    u64 lead() const { return c.empty() ? 0 : c.back(); }
    u64 coeff(int i) const { return (i < 0 || i >= static_cast<int>(c.size())) ? 0 : c[static_cast<size_t>(i)]; }

    bool operator==(const ModPoly& o) const { return c == o.c; }
    bool operator<(const ModPoly& o) const {  // deterministic ordering
        if (c.size() != o.c.size()) return c.size() < o.c.size();
        for (size_t i = c.size(); i-- > 0;)
            if (c[i] != o.c[i]) return c[i] < o.c[i];
        return false;
    }
};

inline ModPoly mp_x() { return ModPoly{{0, 1}}; }
inline ModPoly mp_one() { return ModPoly{{1}}; }

inline ModPoly mp_reduce(const IntPoly& f, u64 p) {
    ModPoly r;
    r.c.reserve(f.coeffs().size());
    for (const auto& a : f.coeffs()) {
        mpz_class m = a % static_cast<unsigned long>(p);
        if (m < 0) m += static_cast<unsigned long>(p);
        r.c.push_back(mpz_get_ui(m.get_mpz_t()));
    }
    r.trim();
    return r;
}

inline IntPoly mp_lift(const ModPoly& f) {
    std::vector<mpz_class> c;
    c.reserve(f.c.size());
    for (u64 v : f.c) c.emplace_back(static_cast<unsigned long>(v));
    return IntPoly(std::move(c));
}

inline ModPoly mp_add(const ModPoly& a, const ModPoly& b, u64 p) {
    ModPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) {
        u64 s = (i < a.c.size() ? a.c[i] : 0) + (i < b.c.size() ? b.c[i] : 0);
        r.c[i] = s >= p ? s - p : s;
    }
    r.trim();
    return r;
}

inline ModPoly mp_sub(const ModPoly& a, const ModPoly& b, u64 p) {
    ModPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) {
        u64 x = i < a.c.size() ? a.c[i] : 0;
        u64 y = i < b.c.size() ? b.c[i] : 0;
        r.c[i] = x >= y ? x - y : x + p - y;
    }
    r.trim();
    return r;
}

inline ModPoly mp_mul(const ModPoly& a, const ModPoly& b, u64 p) {
    if (a.is_zero() || b.is_zero()) return {};
    ModPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            u64 t = r.c[i + j] + mulmod_u64(a.c[i], b.c[j], p);
            r.c[i + j] = t >= p ? t - p : t;
        }
    }
    r.trim();
    return r;
}

inline ModPoly mp_scale(const ModPoly& a, u64 s, u64 p) {
    ModPoly r = a;
    for (auto& x : r.c) x = mulmod_u64(x, s % p, p);
    r.trim();
    return r;
}

inline u64 mp_invmod(u64 a, u64 p) { return powmod_u64(a % p, p - 2, p); }

inline ModPoly mp_monic(const ModPoly& a, u64 p) {
    if (a.is_zero() || a.lead() == 1) return a;
    return mp_scale(a, mp_invmod(a.lead(), p), p);
}

// Division with remainder; b nonzero.
inline void mp_divrem(const ModPoly& a, const ModPoly& b, u64 p, ModPoly& q, ModPoly& r) {
    if (b.is_zero()) throw std::invalid_argument("mp_divrem: zero divisor");
    r = a;
    q = ModPoly{};
    int db = b.degree();
    if (a.degree() < db) return;
    q.c.assign(static_cast<size_t>(a.degree() - db) + 1, 0);
    u64 inv = mp_invmod(b.lead(), p);
    while (!r.is_zero() && r.degree() >= db) {
        int k = r.degree() - db;
        u64 f = mulmod_u64(r.lead(), inv, p);
        q.c[static_cast<size_t>(k)] = f;
        for (int i = 0; i <= db; ++i) {
            u64& rc = r.c[static_cast<size_t>(k + i)];
            u64 sub = mulmod_u64(f, b.coeff(i), p);
            rc = rc >= sub ? rc - sub : rc + p - sub;
        }
        r.trim();
    }
    q.trim();
}

inline ModPoly mp_mod(const ModPoly& a, const ModPoly& b, u64 p) {
    ModPoly q, r;
    mp_divrem(a, b, p, q, r);
    return r;
}

inline ModPoly mp_gcd(ModPoly a, ModPoly b, u64 p) {
    while (!b.is_zero()) {
        ModPoly r = mp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return mp_monic(a, p);
}

inline ModPoly mp_mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& m, u64 p) {
    return mp_mod(mp_mul(a, b, p), m, p);
}

// base^e mod (m, p); e arbitrary-precision
inline ModPoly mp_powmod(const ModPoly& base, const mpz_class& e, const ModPoly& m, u64 p) {
    ModPoly result = mp_one();
    ModPoly b = mp_mod(base, m, p);
    mpz_class k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) result = mp_mulmod(result, b, m, p);
        k >>= 1;
        if (k > 0) b = mp_mulmod(b, b, m, p);
    }
    return result;
}

inline ModPoly mp_derivative(const ModPoly& a, u64 p) {
    ModPoly r;
    if (a.degree() < 1) return r;
    r.c.resize(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) r.c[i - 1] = mulmod_u64(a.c[i], i % p, p);
    r.trim();
    return r;
}

// ---------------------------------------------------- factorization

struct ModFactor {
    ModPoly poly;  // monic irreducible
    int mult = 1;
};

struct ModFactorization {
    u64 p = 0;
    u64 unit = 1;  // leading coefficient of f mod p
    std::vector<ModFactor> factors;
    u64 seed = kFactorSeed;
};

namespace detail {

// squarefree decomposition in characteristic p (handles p-th power parts)
inline void mp_squarefree(const ModPoly& f, u64 p, int outer_mult,
                          std::vector<std::pair<ModPoly, int>>& out) {
    if (f.degree() < 1) return;
    ModPoly d = mp_derivative(f, p);
    if (d.is_zero()) {
        // f = g(x^p)
        ModPoly g;
        g.c.resize(static_cast<size_t>(f.degree() / static_cast<int>(p)) + 1, 0);
        for (size_t i = 0; i < f.c.size(); ++i) {
            if (f.c[i] == 0) continue;
            if (i % p != 0) throw consistency_error("mp_squarefree: bad p-th power");
            // g coefficient^(1/p) == coefficient (Frobenius is identity on F_p)
            g.c[i / p] = f.c[i];
        }
        g.trim();
        mp_squarefree(g, p, outer_mult * static_cast<int>(p), out);
        return;
    }
    ModPoly c = mp_gcd(f, d, p);
    ModPoly w = mp_monic(f, p);
    ModPoly q, r;
    mp_divrem(w, c, p, q, r);
    w = q;  // squarefree part of the non-p-power portion
    int i = 1;
    while (w.degree() > 0) {
        ModPoly y = mp_gcd(w, c, p);
        mp_divrem(w, y, p, q, r);
        ModPoly z = q;  // product of factors with exact multiplicity i
        if (z.degree() > 0) out.emplace_back(mp_monic(z, p), i * outer_mult);
        w = y;
        mp_divrem(c, y, p, q, r);
        c = q;
        ++i;
    }
    // what is left of c is a perfect p-th power; the derivative-zero branch
    // of the recursion applies the extra factor p to the multiplicities
    if (c.degree() > 0) mp_squarefree(c, p, outer_mult, out);
}

// equal-degree splitting of a monic squarefree product of degree-d
// irreducibles (Cantor-Zassenhaus; trace method for p = 2)
inline void mp_edf(const ModPoly& f, int d, u64 p, std::mt19937_64& rng,
                   std::vector<ModPoly>& out) {
    if (f.degree() == d) {
        out.push_back(f);
        return;
    }
    ModPoly a;
    ModPoly g;
    while (true) {
        // random polynomial of degree < deg f
        a.c.assign(static_cast<size_t>(f.degree()), 0);
        for (auto& x : a.c) x = rng() % p;
        a.trim();
        if (a.degree() < 1) continue;
        if (p == 2) {
            // trace map over F_2: a + a^2 + a^4 + ... (d*? terms)
            ModPoly t = mp_mod(a, f, p);
            ModPoly acc = t;
            for (int i = 1; i < d; ++i) {
                t = mp_mulmod(t, t, f, p);
                acc = mp_add(acc, t, p);
            }
            g = mp_gcd(acc, f, p);
        } else {
            mpz_class e = (pow_mpz(mpz_class(static_cast<unsigned long>(p)),
                                   static_cast<unsigned long>(d)) - 1) / 2;
            ModPoly b = mp_powmod(a, e, f, p);
            b = mp_sub(b, mp_one(), p);
            g = mp_gcd(b, f, p);
        }
        if (g.degree() > 0 && g.degree() < f.degree()) break;
    }
    ModPoly q, r;
    mp_divrem(f, g, p, q, r);
    mp_edf(g, d, p, rng, out);
    mp_edf(mp_monic(q, p), d, p, rng, out);
}

}  // namespace detail

// Factorization of f mod p into monic irreducibles with multiplicities.
// Deterministic: the equal-degree stage uses a fixed seed, and factors are
// sorted by (degree, coefficient vector).
inline ModFactorization factor_mod_p(const IntPoly& f, u64 p, u64 seed = kFactorSeed) {
    if (!is_prime_u64(p)) throw std::invalid_argument("factor_mod_p: p is not prime");
    ModFactorization out;
    out.p = p;
    out.seed = seed;
    ModPoly fp = mp_reduce(f, p);
    if (fp.is_zero()) throw std::invalid_argument("factor_mod_p: f vanishes mod p");
    out.unit = fp.lead();
    if (fp.degree() < 1) return out;

    std::vector<std::pair<ModPoly, int>> sqf;
    detail::mp_squarefree(mp_monic(fp, p), p, 1, sqf);

    std::mt19937_64 rng(seed);
    for (auto& [part, mult] : sqf) {
        // distinct-degree splitting
        ModPoly rest = part;
        ModPoly h = mp_mod(mp_x(), rest, p);
        int d = 0;
        while (rest.degree() > 0 && 2 * (d + 1) <= rest.degree()) {
            ++d;
            h = mp_powmod(h, mpz_class(static_cast<unsigned long>(p)), rest, p);
            ModPoly g = mp_gcd(mp_sub(h, mp_mod(mp_x(), rest, p), p), rest, p);
            if (g.degree() > 0) {
                std::vector<ModPoly> irr;
                detail::mp_edf(g, d, p, rng, irr);
                for (auto& v : irr) out.factors.push_back({v, mult});
                ModPoly q, r;
                mp_divrem(rest, g, p, q, r);
                rest = mp_monic(q, p);
                h = mp_mod(h, rest, p);
            }
        }
        if (rest.degree() > 0) out.factors.push_back({rest, mult});
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const ModFactor& a, const ModFactor& b) { return a.poly < b.poly; });
    return out;
}

// Re-multiply a factorization (for audits).
inline ModPoly mp_product(const ModFactorization& fac) {
    ModPoly acc = mp_one();
    for (const auto& f : fac.factors)
        for (int i = 0; i < f.mult; ++i) acc = mp_mul(acc, f.poly, fac.p);
    return mp_scale(acc, fac.unit, fac.p);
}

inline bool mp_irreducible(const IntPoly& f, u64 p) {
    ModPoly fp = mp_reduce(f, p);
    if (fp.degree() != f.degree()) return false;  // degree must not drop
    auto fac = factor_mod_p(f, p);
    return fac.factors.size() == 1 && fac.factors[0].mult == 1;
}

}  // namespace smallgen
