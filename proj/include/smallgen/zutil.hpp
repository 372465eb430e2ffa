#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "smallgen/errors.hpp"
#include "smallgen/version.hpp"

namespace smallgen {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 powmod_u64(u64 b, u64 e, u64 m) {
    u64 r = m == 1 ? 0 : 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for the full 64-bit range (the 12-witness set
// is known to be exact below 3.3 * 10^24).
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while (!(d & 1)) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a % n, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

struct PrimalityResult {
    bool prime = false;
    // True when the verdict rests on random-witness Miller-Rabin (n >= 2^64)
    // rather than the deterministic witness set.
    bool probable = false;
};

// Miller-Rabin with `rounds` random witnesses; deterministic below 2^64.
inline PrimalityResult is_prime_mpz(const mpz_class& n, int rounds = 64,
                                    u64 seed = global_seed()) {
    if (sgn(n) <= 0) return {false, false};
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
        return {is_prime_u64(static_cast<u64>(mpz_get_ui(n.get_mpz_t()))), false};
    }
    if (mpz_even_p(n.get_mpz_t())) return {false, false};
    mpz_class d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;
    std::mt19937_64 rng(seed);
    mpz_class x, a;
    for (int r = 0; r < rounds; ++r) {
        // witness in [2, n-2]
        a = mpz_class(static_cast<unsigned long>(rng()));
        a %= (n - 3);
        a += 2;
        mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned long i = 1; i < s; ++i) {
            x = (x * x) % n;
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return {false, true};
    }
    return {true, true};
}

inline bool is_prime(const mpz_class& n) { return is_prime_mpz(n).prime; }

// ---------------------------------------------------------- factorization

namespace detail {

inline mpz_class pollard_rho(const mpz_class& n, u64 seed) {
    // Brent's variant; n odd composite, not a prime power obstacle.
    std::mt19937_64 rng(seed);
    while (true) {
        mpz_class y = mpz_class(static_cast<unsigned long>(rng())) % n;
        mpz_class c = 1 + mpz_class(static_cast<unsigned long>(rng())) % (n - 1);
        mpz_class x = y, d = 1, q = 1, ys = y;
        unsigned long r = 1;
        const unsigned long m = 128;
        while (d == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
            unsigned long k = 0;
            while (k < r && d == 1) {
                ys = y;
                unsigned long lim = std::min(m, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r <<= 1;
        }
        if (d == n) {
            // backtrack
            d = 1;
            while (d == 1) {
                ys = (ys * ys + c) % n;
                mpz_class diff = abs(x - ys);
                mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (d != n) return d;
    }
}

inline void factor_rec(mpz_class n, std::map<mpz_class, unsigned>& out, u64 seed) {
    if (n == 1) return;
    if (is_prime_mpz(n).prime) {
        out[n] += 1;
        return;
    }
    // perfect power shortcut
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long k = 2; k <= mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
            mpz_class r;
            if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0) {
                std::map<mpz_class, unsigned> base;
                factor_rec(r, base, seed);
                for (auto& [p, e] : base) out[p] += e * k;
                return;
            }
        }
    }
    mpz_class d = pollard_rho(n, seed);
    factor_rec(d, out, seed + 1);
    factor_rec(n / d, out, seed + 1);
}

}  // namespace detail

// Full factorization: trial division below 10^4, then Pollard rho.
inline std::map<mpz_class, unsigned> factor_mpz(mpz_class n, u64 seed = global_seed()) {
    if (n == 0) throw std::invalid_argument("factor_mpz: zero");
    std::map<mpz_class, unsigned> out;
    if (n < 0) n = -n;
    for (u64 p = 2; p < 10000 && p * p <= n; p = (p == 2 ? 3 : p + 2)) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out[mpz_class(static_cast<unsigned long>(p))] += 1;
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        }
    }
    detail::factor_rec(n, out, seed);
    out.erase(mpz_class(1));
    return out;
}

inline mpz_class euler_phi(const mpz_class& n) {
    if (n <= 0) throw std::invalid_argument("euler_phi: n must be positive");
    if (n == 1) return 1;
    mpz_class r = n;
    for (auto& [p, e] : factor_mpz(n)) {
        (void)e;
        r = r / p * (p - 1);
    }
    return r;
}

inline mpz_class squarefree_part(const mpz_class& n) {
    if (n == 0) return 0;
    mpz_class r = sgn(n);
    for (auto& [p, e] : factor_mpz(n)) {
        if (e % 2) r *= p;
    }
    return r;
}

inline bool is_squarefree(const mpz_class& n) {
    if (n == 0) return false;
    for (auto& [p, e] : factor_mpz(n)) {
        (void)p;
        if (e > 1) return false;
    }
    return true;
}

inline std::vector<mpz_class> divisors_of(const mpz_class& n) {
    std::vector<mpz_class> divs{1};
    for (auto& [p, e] : factor_mpz(n)) {
        size_t base = divs.size();
        mpz_class pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

// floor k-th root for word-sized n
inline u64 kth_root_u64(u64 n, unsigned k) {
    if (k == 1 || n < 2) return n;
    u64 r = static_cast<u64>(std::pow(static_cast<double>(n), 1.0 / k));
    auto pow_le = [&](u64 b) {  // b^k <= n without overflow
        u64 acc = 1;
        for (unsigned i = 0; i < k; ++i) {
            if (b != 0 && acc > n / b) return false;
            acc *= b;
        }
        return acc <= n;
    };
    while (r > 1 && !pow_le(r)) --r;
    while (pow_le(r + 1)) ++r;
    return r;
}

inline bool is_perfect_kth_power_u64(u64 n, unsigned k, u64* root = nullptr) {
    u64 r = kth_root_u64(n, k);
    u64 acc = 1;
    for (unsigned i = 0; i < k; ++i) acc *= r;
    if (root) *root = r;
    return acc == n;
}

// isqrt: floor of the square root.
inline mpz_class isqrt(const mpz_class& n) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const mpz_class& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t());
}

// Kronecker symbol (a|n).
inline int kronecker(const mpz_class& a, const mpz_class& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline mpz_class pow_mpz(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline mpq_class pow_mpq(const mpq_class& b, unsigned long e) {
    mpq_class r = 1;
    for (unsigned long i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace smallgen
