#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <vector>

#include "smallgen/dyadic.hpp"
#include "smallgen/zutil.hpp"

namespace smallgen {

// Prime counting in arithmetic progressions, least primes, interval
// searches, and the parameterized evaluators behind the least-prime
// machinery.  All inequality verdicts on real quantities go through
// enclosure arithmetic with precision escalation.

struct APSpec {
    unsigned long q = 1;
    unsigned long a = 1;
};

inline APSpec make_ap_spec(unsigned long q, unsigned long a) {
    if (q == 0) throw std::invalid_argument("APSpec: q must be positive");
    a %= q;
    if (q == 1) a = 0;
    if (std::gcd(a == 0 ? q : a, q) != 1 && q > 1)
        throw std::invalid_argument("APSpec: residue not coprime to modulus");
    return APSpec{q, a};
}

// ------------------------------------------------------------ prime sieve

// Segmented sieve of Eratosthenes; calls fn(p) for every prime p <= limit
// in increasing order.  Segment width 2^20.
template <typename Fn>
inline void for_primes_up_to(u64 limit, Fn&& fn) {
    if (limit < 2) return;
    const u64 seg_size = 1ull << 20;
    u64 sqrt_lim = static_cast<u64>(isqrt(mpz_class(static_cast<unsigned long>(limit))).get_ui());
    // base primes
    std::vector<char> small(static_cast<size_t>(sqrt_lim) + 1, 1);
    std::vector<u64> base;
    for (u64 i = 2; i <= sqrt_lim; ++i) {
        if (!small[static_cast<size_t>(i)]) continue;
        base.push_back(i);
        for (u64 j = i * i; j <= sqrt_lim; j += i) small[static_cast<size_t>(j)] = 0;
    }
    std::vector<char> seg(seg_size);
    for (u64 low = 2; low <= limit; low += seg_size) {
        u64 high = std::min(low + seg_size - 1, limit);
        std::fill(seg.begin(), seg.end(), 1);
        for (u64 p : base) {
            if (p * p > high) break;
            u64 start = std::max(p * p, (low + p - 1) / p * p);
            for (u64 j = start; j <= high; j += p) seg[static_cast<size_t>(j - low)] = 0;
        }
        for (u64 n = low; n <= high; ++n)
            if (seg[static_cast<size_t>(n - low)]) fn(n);
    }
}

enum class CountMethod { Sieve, Direct };

// pi(x; q, a): number of primes p <= x with p = a (mod q)
inline u64 pi_qa(u64 x, const APSpec& spec, CountMethod method = CountMethod::Sieve) {
    u64 count = 0;
    if (method == CountMethod::Sieve) {
        for_primes_up_to(x, [&](u64 p) {
            if (p % spec.q == spec.a % spec.q) ++count;
        });
    } else {
        // per-number deterministic primality testing along the progression
        u64 start = spec.a % spec.q;
        if (start == 0) start = spec.q;
        for (u64 n = start; n <= x; n += spec.q)
            if (is_prime_u64(n)) ++count;
    }
    return count;
}

// ------------------------------------------------------------- log algebra

// Exact finite combination sum_p c_p log p over prime basis elements.
struct LogComb {
    std::map<u64, mpq_class> coeff;

    void add_log_of(u64 n, const mpq_class& w) {
        if (n == 0) throw std::invalid_argument("LogComb: log 0");
        if (n == 1) return;
        for (auto& [p, e] : factor_mpz(mpz_class(static_cast<unsigned long>(n)))) {
            coeff[p.get_ui()] += w * mpq_class(static_cast<long>(e));
            if (coeff[p.get_ui()] == 0) coeff.erase(p.get_ui());
        }
    }
    void add_log_prime(u64 p, const mpq_class& w) {
        coeff[p] += w;
        if (coeff[p] == 0) coeff.erase(p);
    }
    bool is_zero() const { return coeff.empty(); }

    RealEnclosure encl(unsigned long prec) const {
        RealEnclosure acc = RealEnclosure::point(Dyadic(0));
        for (const auto& [p, w] : coeff) {
            RealEnclosure l = log_of_mpq(mpq_class(static_cast<unsigned long>(p)), prec);
            acc = acc + l * RealEnclosure::of_mpq(w);
        }
        return acc;
    }
    double approx() const { return encl(64).mid().to_double(); }
};

inline LogComb operator-(const LogComb& a, const LogComb& b) {
    LogComb r = a;
    for (const auto& [p, w] : b.coeff) {
        r.coeff[p] -= w;
        if (r.coeff[p] == 0) r.coeff.erase(p);
    }
    return r;
}

// certified sign of a log-combination (0 only for the empty combination;
// log-independence of the primes guarantees separation otherwise)
inline int logcomb_sign(const LogComb& c) {
    if (c.is_zero()) return 0;
    for (unsigned long prec = 96; prec <= 16384; prec *= 2) {
        RealEnclosure e = c.encl(prec);
        if (e.lo.sign() > 0) return 1;
        if (e.hi.sign() < 0) return -1;
    }
    throw undecided_error("logcomb_sign: could not separate from zero");
}

// ------------------------------------------------------------------- psi

// psi(x; q, a) = sum of Lambda(n) over n <= x, n = a (mod q), carried as a
// multiset {p -> number of prime powers of p in the progression}.
// Computed two independent ways and asserted equal.
struct PsiResult {
    std::map<u64, u64> mult;  // psi = sum mult[p] * log p

    LogComb comb() const {
        LogComb c;
        for (auto& [p, m] : mult) c.add_log_prime(p, mpq_class(static_cast<unsigned long>(m)));
        return c;
    }
    RealEnclosure encl(unsigned long prec = 128) const { return comb().encl(prec); }
};

inline PsiResult psi_qa(u64 x, const APSpec& spec) {
    // route 1: scan the progression, detect prime powers by exact k-th roots
    PsiResult r1;
    u64 start = spec.a % spec.q;
    if (start == 0) start = spec.q;
    for (u64 n = start; n <= x; n += spec.q) {
        if (n < 2) continue;
        if (is_prime_u64(n)) {
            r1.mult[n] += 1;
            continue;
        }
        for (unsigned k = 2; (1ull << k) <= n; ++k) {
            u64 p;
            if (is_perfect_kth_power_u64(n, k, &p) && is_prime_u64(p)) {
                r1.mult[p] += 1;
                break;
            }
        }
    }
    // route 2: iterate primes from the sieve, then their powers
    PsiResult r2;
    for_primes_up_to(x, [&](u64 p) {
        for (u64 pk = p;; ) {
            if (pk % spec.q == spec.a % spec.q) r2.mult[p] += 1;
            if (pk > x / p) break;
            pk *= p;
        }
    });
    if (r1.mult != r2.mult)
        throw consistency_error("psi_qa: the two computation routes disagree");
    return r1;
}

// The prime-restricted form sum_{p <= x, p = a (q)} floor(log x / log p) log p
// (the shape the pi-psi sandwich is derived from).
inline PsiResult psi_qa_prime_restricted(u64 x, const APSpec& spec) {
    PsiResult r;
    for_primes_up_to(x, [&](u64 p) {
        if (p % spec.q != spec.a % spec.q) return;
        u64 k = 0, pk = 1;
        while (pk <= x / p) {
            pk *= p;
            ++k;
        }  // k = floor(log x / log p)
        r.mult[p] += k;
    });
    return r;
}

// ------------------------------------------------------------- sandwich

struct SandwichReport {
    u64 x = 0;
    APSpec spec;
    u64 pi_x = 0, pi_sqrt = 0;
    PsiResult psi_paper;        // prime-restricted form (drives the bounds)
    PsiResult psi_von_mangoldt; // Lambda-form, reported alongside
    bool lower_ok = false, upper_ok = false;
    double lower_slack = 0, upper_slack = 0;
};

// (1/2) log x (pi(x) - pi(sqrt x)) <= psi(x) <= log x (pi(x) + pi(sqrt x)),
// with psi in the prime-restricted form; both sides evaluated exactly as
// log-combinations and compared with certified sign.
inline SandwichReport check_pi_psi_sandwich(u64 x, const APSpec& spec) {
    if (x < 2) throw std::invalid_argument("check_pi_psi_sandwich: x must be >= 2");
    SandwichReport rep;
    rep.x = x;
    rep.spec = spec;
    u64 sx = static_cast<u64>(isqrt(mpz_class(static_cast<unsigned long>(x))).get_ui());
    rep.pi_x = pi_qa(x, spec);
    rep.pi_sqrt = pi_qa(sx, spec);
    rep.psi_paper = psi_qa_prime_restricted(x, spec);
    rep.psi_von_mangoldt = psi_qa(x, spec);

    LogComb psi = rep.psi_paper.comb();
    LogComb lower, upper;
    lower.add_log_of(x, mpq_class(static_cast<long>(rep.pi_x) - static_cast<long>(rep.pi_sqrt), 2));
    upper.add_log_of(x, mpq_class(static_cast<unsigned long>(rep.pi_x + rep.pi_sqrt)));

    LogComb dl = psi - lower;  // >= 0 expected
    LogComb du = upper - psi;  // >= 0 expected
    rep.lower_ok = logcomb_sign(dl) >= 0;
    rep.upper_ok = logcomb_sign(du) >= 0;
    rep.lower_slack = dl.approx();
    rep.upper_slack = du.approx();
    return rep;
}

// ----------------------------------------------------- least-prime search

struct FoundPrime {
    mpz_class p;
    bool probable = false;  // primality by random-witness Miller-Rabin (p >= 2^64)
};

// smallest prime p > x with p = a (mod q)
inline FoundPrime least_prime_in_ap_above(const mpz_class& q, const mpz_class& a,
                                          const mpz_class& x) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
    if (q < 1 || (q > 1 && g != 1))
        throw std::invalid_argument("least_prime_in_ap_above: residue not coprime");
    mpz_class n = x + 1;
    mpz_class r = ((a % q) + q) % q;
    mpz_class off = ((r - n) % q + q) % q;
    n += off;
    if (n < 2) n += ((mpz_class(2) - n) / q + 1) * q;
    for (;; n += q) {
        PrimalityResult pr = is_prime_mpz(n);
        if (pr.prime) return {n, pr.probable};
    }
}

// least prime in (x, y] with p = a (mod q); none if the slice is empty
inline std::optional<FoundPrime> prime_in_interval_ap(const mpq_class& x, const mpq_class& y,
                                                      const mpz_class& q, const mpz_class& a) {
    if (x < 2 || y <= x) throw std::invalid_argument("prime_in_interval_ap: need 2 <= x < y");
    mpz_class floor_x;
    mpz_fdiv_q(floor_x.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    FoundPrime p = least_prime_in_ap_above(q, a, floor_x);
    while (mpq_class(p.p) <= x) p = least_prime_in_ap_above(q, a, p.p);
    if (mpq_class(p.p) > y) return std::nullopt;
    return p;
}

// least prime p with N < p^2 <= gamma^2 N and p mod f in `residues`
// (the sharp splitting slice (sqrt N, gamma sqrt N]); exact integer bounds
inline std::optional<FoundPrime> least_split_prime_sqrt_interval(
    const mpz_class& N, unsigned long gamma, unsigned long f,
    const std::vector<unsigned long>& residues) {
    if (N < 1) throw std::invalid_argument("least_split_prime_sqrt_interval: N must be >= 1");
    mpz_class lo = isqrt(N);            // candidates start above sqrt(N)
    mpz_class hi = isqrt(gamma * gamma * N);  // p <= hi
    // merged ascending walk over the residue progressions
    struct Node {
        mpz_class v;
        unsigned long r;
    };
    auto cmp = [](const Node& a, const Node& b) { return a.v > b.v; };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
    for (unsigned long r : residues) {
        mpz_class start = lo + 1;
        mpz_class rr(r % f);
        mpz_class off = ((rr - start) % f + f) % f;
        heap.push({start + off, r});
    }
    while (!heap.empty()) {
        Node n = heap.top();
        heap.pop();
        if (n.v > hi) continue;
        if (n.v * n.v > N && n.v * n.v <= gamma * gamma * N) {
            PrimalityResult pr = is_prime_mpz(n.v);
            if (pr.prime) return FoundPrime{n.v, pr.probable};
        }
        heap.push({n.v + f, n.r});
    }
    return std::nullopt;
}

// ------------------------------------------------- parameter evaluators

struct LinnikParameters {
    mpq_class c = 1, c1, c2, c3;
    mpq_class U = 1;
    std::optional<mpq_class> delta1;  // 1 - beta1 when an exceptional zero exists
    mpz_class q = 3;

    void validate() const {
        if (!(c > 0 && c2 > 1 && c1 > 0 && c1 < 1 && c3 > 0 && c3 < 1))
            throw std::invalid_argument("LinnikParameters: need c,c2 > 1 > c1,c3 > 0 (c > 0)");
        if (U <= 0) throw std::invalid_argument("LinnikParameters: U must be positive");
        if (delta1 && *delta1 <= 0) throw std::invalid_argument("LinnikParameters: delta1 <= 0");
    }
};

inline RealEnclosure div_encl(const RealEnclosure& a, const mpq_class& r, unsigned long prec) {
    if (sgn(r) == 0) throw std::invalid_argument("div_encl: division by zero");
    mpq_class lo = a.lo.to_mpq() / r, hi = a.hi.to_mpq() / r;
    if (sgn(r) < 0) std::swap(lo, hi);
    RealEnclosure le = RealEnclosure::of_mpq(lo, prec), he = RealEnclosure::of_mpq(hi, prec);
    return RealEnclosure(le.lo, he.hi);
}

inline RealEnclosure abs_encl(const RealEnclosure& a) {
    if (a.lo.sign() >= 0) return a;
    if (a.hi.sign() <= 0) return -a;
    return RealEnclosure(Dyadic(0), std::max(-a.lo, a.hi));
}

inline RealEnclosure max_encl(const RealEnclosure& a, const RealEnclosure& b) {
    return RealEnclosure(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

struct LinnikEvaluation {
    RealEnclosure value;
    std::vector<RealEnclosure> terms;
    bool u_constraint_ok = true;  // U > 3 (gamma+3)/(gamma-3) when gamma supplied
};

// L_U = max{ 4 c2, 4/c3, 4 log(2Uc)/c1, 4 log(2Uc)/(c3 |log c1|) }
inline LinnikEvaluation evaluate_L_U(const LinnikParameters& par,
                                     std::optional<mpq_class> gamma = std::nullopt,
                                     unsigned long prec = 160) {
    par.validate();
    LinnikEvaluation out;
    if (gamma) {
        if (*gamma <= 3) throw std::invalid_argument("evaluate_L_U: gamma must exceed 3");
        out.u_constraint_ok = par.U > 3 * (*gamma + 3) / (*gamma - 3);
    }
    RealEnclosure log2uc = log_of_mpq(2 * par.U * par.c, prec);
    RealEnclosure abslogc1 = abs_encl(log_of_mpq(par.c1, prec));
    RealEnclosure t1 = RealEnclosure::of_mpq(4 * par.c2);
    RealEnclosure t2 = RealEnclosure::of_mpq(4 / par.c3);
    RealEnclosure t3 = div_encl(log2uc * Dyadic(4), par.c1, prec);
    // 4 log(2Uc) / (c3 |log c1|): both factors positive here (U >= 1, c >= 1
    // not guaranteed -- 2Uc may be < 1, log negative; the formula still
    // takes the raw log, matching the source expression)
    RealEnclosure denom = abslogc1 * RealEnclosure::of_mpq(par.c3);
    mpq_class dl = denom.lo.to_mpq(), dh = denom.hi.to_mpq();
    if (sgn(dl) <= 0) throw undecided_error("evaluate_L_U: |log c1| enclosure touches 0");
    RealEnclosure num = log2uc * Dyadic(4);
    RealEnclosure q1 = div_encl(num, dh, prec);
    RealEnclosure q2 = div_encl(num, dl, prec);
    RealEnclosure t4(std::min(q1.lo, q2.lo), std::max(q1.hi, q2.hi));
    out.terms = {t1, t2, t3, t4};
    out.value = max_encl(max_encl(t1, t2), max_encl(t3, t4));
    return out;
}

// nu = max{ 4 c2, 4/c1, 4/c3, 4 log(2Uc)/(c3 |log c1|) }
inline LinnikEvaluation evaluate_nu(const LinnikParameters& par, unsigned long prec = 160) {
    par.validate();
    LinnikEvaluation out;
    RealEnclosure log2uc = log_of_mpq(2 * par.U * par.c, prec);
    RealEnclosure abslogc1 = abs_encl(log_of_mpq(par.c1, prec));
    RealEnclosure t1 = RealEnclosure::of_mpq(4 * par.c2);
    RealEnclosure t2 = RealEnclosure::of_mpq(4 / par.c1);
    RealEnclosure t3 = RealEnclosure::of_mpq(4 / par.c3);
    RealEnclosure denom = abslogc1 * RealEnclosure::of_mpq(par.c3);
    mpq_class dl = denom.lo.to_mpq(), dh = denom.hi.to_mpq();
    if (sgn(dl) <= 0) throw undecided_error("evaluate_nu: |log c1| enclosure touches 0");
    RealEnclosure num = log2uc * Dyadic(4);
    RealEnclosure q1 = div_encl(num, dh, prec);
    RealEnclosure q2 = div_encl(num, dl, prec);
    RealEnclosure t4(std::min(q1.lo, q2.lo), std::max(q1.hi, q2.hi));
    out.terms = {t1, t2, t3, t4};
    out.value = max_encl(max_encl(t1, t2), max_encl(t3, t4));
    return out;
}

// eta = c1 / (2 log q) without an exceptional zero,
// eta = c3 |log(2 delta1 log q)| / (2 log q) with one.
inline RealEnclosure evaluate_eta_with_logq(const LinnikParameters& par,
                                            const RealEnclosure& logq, unsigned long prec) {
    if (logq.lo.sign() <= 0) throw std::invalid_argument("evaluate_eta: log q must be positive");
    RealEnclosure two_logq = logq * Dyadic(2);
    auto div_by_encl = [&](const RealEnclosure& num, const RealEnclosure& den) {
        // den strictly positive
        mpq_class nl = num.lo.to_mpq(), nh = num.hi.to_mpq();
        mpq_class dl = den.lo.to_mpq(), dh = den.hi.to_mpq();
        mpq_class lo = (sgn(nl) >= 0) ? nl / dh : nl / dl;
        mpq_class hi = (sgn(nh) >= 0) ? nh / dl : nh / dh;
        RealEnclosure le = RealEnclosure::of_mpq(lo, prec), he = RealEnclosure::of_mpq(hi, prec);
        return RealEnclosure(le.lo, he.hi);
    };
    if (!par.delta1) {
        return div_by_encl(RealEnclosure::of_mpq(par.c1), two_logq);
    }
    RealEnclosure arg = logq * RealEnclosure::of_mpq(2 * *par.delta1);
    if (arg.lo.sign() <= 0) throw undecided_error("evaluate_eta: 2 delta1 log q touches 0");
    RealEnclosure num = abs_encl(log_encl(arg, prec)) * RealEnclosure::of_mpq(par.c3);
    return div_by_encl(num, two_logq);
}

inline RealEnclosure evaluate_eta(const LinnikParameters& par, unsigned long prec = 160) {
    par.validate();
    if (par.q <= 1) throw std::invalid_argument("evaluate_eta: q must exceed 1");
    RealEnclosure logq = log_of_mpq(mpq_class(par.q), prec);
    return evaluate_eta_with_logq(par, logq, prec);
}

// --------------------------------------------------------------- scans

struct ScanRow {
    unsigned long q = 0;
    u64 least_prime = 0;
    double ratio = 0;  // log P(q,1) / log q
    bool probable = false;
    double millis = 0;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    double max_ratio = 0;
    unsigned long argmax_q = 0;
};

// least prime P(q, 1) = 1 (mod q) for each 3 <= q <= q_max
inline ScanResult linnik_exponent_scan(unsigned long q_max) {
    if (q_max < 3) throw std::invalid_argument("linnik_exponent_scan: q_max must be >= 3");
    ScanResult out;
    for (unsigned long q = 3; q <= q_max; ++q) {
        auto t0 = std::chrono::steady_clock::now();
        FoundPrime fp = least_prime_in_ap_above(mpz_class(q), 1, 0);
        ScanRow row;
        row.q = q;
        row.least_prime = fp.p.get_ui();
        row.probable = fp.probable;
        row.ratio =
            std::log(static_cast<double>(row.least_prime)) / std::log(static_cast<double>(q));
        row.millis =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (row.ratio > out.max_ratio) {
            out.max_ratio = row.ratio;
            out.argmax_q = q;
        }
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace smallgen
