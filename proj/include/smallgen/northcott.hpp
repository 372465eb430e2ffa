#pragma once

#include <chrono>
#include <functional>
#include <future>
#include <numeric>
#include <optional>
#include <thread>
#include <tuple>
#include <vector>

#include "smallgen/heights.hpp"
#include "smallgen/numfield.hpp"

namespace smallgen {

// Certified enumeration of algebraic numbers of bounded height: all
// primitive irreducible degree-d polynomials with positive lead and Mahler
// measure M <= B^d, generated from the Landau coefficient box
// |a_i| <= C(d,i) B^d.  Bounds are carried squared (t2 = B^(2d)) as exact
// rationals so every box cap and filter decision is exact.

struct EnumerationBudget {
    unsigned long max_candidates = 200000000;
    double max_seconds = 86400;
    double max_b2 = 1e12;  // cap on B^2
};

struct DeltaCertificate {
    FieldPtr field;
    mpq_class bound_t2;  // B^(2d) of the certification scan
    std::optional<IntPoly> generator;
    std::optional<LogHeight> height;
    bool exhaustive = false;
    unsigned long candidates_scanned = 0;
    double wall_seconds = 0;
};

namespace northdetail {

inline mpz_class floor_sqrt_mpq(const mpq_class& q) {
    if (sgn(q) < 0) throw std::invalid_argument("floor_sqrt_mpq: negative");
    mpz_class nd = q.get_num() * q.get_den();
    mpz_class r = isqrt(nd) / q.get_den();
    while ((r + 1) * (r + 1) * q.get_den() <= q.get_num()) ++r;
    while (r > 0 && r * r * q.get_den() > q.get_num()) --r;
    return r;
}

// exact decision M(f)^2 <= t2 for an irreducible quadratic with positive
// lead; avoids root isolation entirely
inline bool quad_measure2_le(const IntPoly& f, const mpq_class& t2) {
    const mpz_class &a = f.coeff(2), &b = f.coeff(1), &c = f.coeff(0);
    mpz_class disc = b * b - 4 * a * c;
    auto le = [&](const mpz_class& m) { return mpq_class(m * m) <= t2; };
    if (disc < 0) return le(std::max(a, mpz_class(abs(c))));
    // real roots; f(+-1) != 0 since f is irreducible of degree 2
    mpz_class f1 = a + b + c, fm1 = a - b + c;
    if (sgn(f1) * sgn(fm1) < 0) {
        // exactly one root in (-1, 1): M = (|b| + sqrt(disc)) / 2
        // M^2 <= t2  <=>  b^2 + disc + 2|b| sqrt(disc) <= 4 t2
        mpq_class rhs = 4 * t2 - mpq_class(b * b + disc);
        if (sgn(rhs) < 0) return false;
        return mpq_class(4 * b * b * disc) <= rhs * rhs;
    }
    if (sgn(f1) > 0 && sgn(fm1) > 0 && abs(b) < 2 * a) return le(a);  // both in (-1, 1)
    return le(abs(c));                                                // both outside
}

// generic decision via the Mahler enclosure, with exact fast paths
inline bool measure2_le(const IntPoly& f, const mpq_class& t2) {
    for (long w = 48;; w *= 2) {
        MahlerResult m = mahler_measure(f, Dyadic(mpz_class(1), -w));
        if (m.exact) return (*m.exact) * (*m.exact) <= t2;
        RealEnclosure m2 = square(m.measure);
        if (m2.hi.to_mpq() <= t2) return true;
        if (m2.lo.to_mpq() > t2) return false;
        if (w > (1 << 14))
            throw undecided_error("measure filter undecided: M^2 equals the bound?");
    }
}

// full candidate filter; returns true when f is primitive, irreducible,
// positive-lead, degree d, and M(f)^2 <= t2
inline bool candidate_passes(const IntPoly& f, int d, const mpq_class& t2) {
    if (f.degree() != d) return false;
    if (!f.is_primitive()) return false;
    if (d == 1) {
        mpz_class m = std::max(abs(f.coeff(0)), abs(f.coeff(1)));
        return mpq_class(m * m) <= t2;
    }
    if (d == 2) {
        mpz_class disc = f.coeff(1) * f.coeff(1) - 4 * f.coeff(2) * f.coeff(0);
        if (disc == 0 || is_perfect_square(disc)) return false;
        return quad_measure2_le(f, t2);
    }
    if (!is_irreducible_q(f)) return false;
    return measure2_le(f, t2);
}

}  // namespace northdetail

// Stream the candidates of degree d with M^2 <= t2 in lexicographic order
// of (a_d, a_{d-1}, ..., a_0).  With reduce_symmetry, only canonical
// representatives under f(x) -> +-f(+-x) and reversal are emitted.  The
// callback returns false to stop; the function returns false when stopped.
// `counter` counts coefficient vectors inspected.  `lead_range`, when
// given, restricts the leading coefficient (used for parallel strata).
template <typename Fn>
inline bool enumerate_candidates_t2(int d, const mpq_class& t2, bool reduce_symmetry, Fn&& fn,
                                    unsigned long* counter = nullptr,
                                    const std::pair<mpz_class, mpz_class>* lead_range = nullptr) {
    if (d < 1) throw std::invalid_argument("enumerate_candidates: degree must be >= 1");
    if (t2 < 1) throw std::invalid_argument("enumerate_candidates: height bound below 1");
    std::vector<mpz_class> cap(static_cast<size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) {
        mpz_class bin = binomial(static_cast<unsigned long>(d), static_cast<unsigned long>(i));
        cap[static_cast<size_t>(i)] = northdetail::floor_sqrt_mpq(t2 * mpq_class(bin * bin));
    }
    mpz_class lead_lo = 1, lead_hi = cap[static_cast<size_t>(d)];
    if (lead_range) {
        lead_lo = std::max(lead_lo, lead_range->first);
        lead_hi = std::min(lead_hi, lead_range->second);
    }

    std::vector<mpz_class> a(static_cast<size_t>(d) + 1);
    for (mpz_class lead = lead_lo; lead <= lead_hi; ++lead) {
        a[static_cast<size_t>(d)] = lead;
        // odometer over (a_{d-1}, ..., a_0), last coordinate fastest
        for (int i = 0; i < d; ++i) a[static_cast<size_t>(i)] = -cap[static_cast<size_t>(i)];
        while (true) {
            if (counter) ++*counter;
            IntPoly f(std::vector<mpz_class>(a.begin(), a.end()));
            if (northdetail::candidate_passes(f, d, t2)) {
                if (!reduce_symmetry || height_orbit_canonical(f) == f) {
                    if (!fn(f)) return false;
                }
            }
            // increment
            int i = 0;
            for (; i < d; ++i) {
                if (a[static_cast<size_t>(i)] < cap[static_cast<size_t>(i)]) {
                    ++a[static_cast<size_t>(i)];
                    for (int j = 0; j < i; ++j) a[static_cast<size_t>(j)] = -cap[static_cast<size_t>(j)];
                    break;
                }
            }
            if (i == d) break;
        }
    }
    return true;
}

namespace northdetail {

// "defines K" tester with a square-class fast path for quadratic fields
inline std::function<bool(const IntPoly&)> defines_tester(const FieldPtr& K) {
    if (K->degree() == 2) {
        mpz_class m = squarefree_part(K->defining_disc());
        return [m, K](const IntPoly& f) {
            mpz_class disc = f.coeff(1) * f.coeff(1) - 4 * f.coeff(2) * f.coeff(0);
            return squarefree_part(disc) == m;
        };
    }
    return [K](const IntPoly& f) {
        if (f.degree() != K->degree()) return false;
        return has_root_in_field(f, K, nullptr, /*assume_irreducible=*/true);
    };
}

struct BestCandidate {
    std::optional<IntPoly> poly;
    std::optional<LogHeight> height;

    // deterministic min-reduction on (height, lexicographic minpoly)
    void offer(const IntPoly& f) {
        LogHeight h = LogHeight::of_algebraic(f, true);
        if (!poly) {
            poly = f;
            height = h;
            return;
        }
        Ordering c = compare(h, *height);
        if (c == Ordering::Less || (c == Ordering::Equal && lex_less(f, *poly))) {
            poly = f;
            height = h;
        }
    }
    void merge(const BestCandidate& o) {
        if (o.poly) offer(*o.poly);
    }
};

struct ScanOutcome {
    BestCandidate best;
    unsigned long scanned = 0;
    bool budget_hit = false;
};

// Full-box minimum scan, parallel over leading-coefficient strata with a
// deterministic sequential merge.
inline ScanOutcome scan_min(const FieldPtr& K, const mpq_class& t2,
                            const std::function<bool(const IntPoly&)>& defines,
                            const EnumerationBudget& budget,
                            std::chrono::steady_clock::time_point t_start,
                            unsigned long already_scanned) {
    const int d = K->degree();
    mpz_class lead_cap = floor_sqrt_mpq(t2);
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned ntasks = hw;
    if (lead_cap < static_cast<long>(hw)) ntasks = std::max(1ul, lead_cap.get_ui());

    std::vector<std::future<ScanOutcome>> futs;
    mpz_class chunk = (lead_cap + ntasks - 1) / ntasks;
    for (unsigned t = 0; t < ntasks; ++t) {
        mpz_class lo = 1 + chunk * t;
        mpz_class hi = chunk * (t + 1);
        if (hi > lead_cap) hi = lead_cap;
        if (lo > hi) break;
        futs.push_back(std::async(std::launch::async, [=, &budget]() {
            ScanOutcome local;
            std::pair<mpz_class, mpz_class> range{lo, hi};
            enumerate_candidates_t2(
                d, t2, /*reduce_symmetry=*/true,
                [&](const IntPoly& f) {
                    if (local.scanned + already_scanned > budget.max_candidates ||
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
                                .count() > budget.max_seconds) {
                        local.budget_hit = true;
                        return false;
                    }
                    if (defines(f)) local.best.offer(f);
                    return true;
                },
                &local.scanned, &range);
            return local;
        }));
    }
    ScanOutcome out;
    for (auto& fu : futs) {
        ScanOutcome part = fu.get();
        out.best.merge(part.best);
        out.scanned += part.scanned;
        out.budget_hit = out.budget_hit || part.budget_hit;
    }
    return out;
}

}  // namespace northdetail

// delta(K): doubling search on B (B^2 doubles, i.e. B *= sqrt 2) starting
// at B = 1.25 until some candidate defines K, then an exhaustive scan at
// the found height certifies minimality.  b2_start (= B^2) is exposed so
// stability under a different schedule start can be tested.
inline DeltaCertificate delta(const FieldPtr& K, const EnumerationBudget& budget = {},
                              const mpq_class& b2_start = mpq_class(25, 16)) {
    auto t0 = std::chrono::steady_clock::now();
    DeltaCertificate cert;
    cert.field = K;
    const int d = K->degree();
    auto defines = northdetail::defines_tester(K);

    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    // phase 1: sequential early-exit search on the doubling schedule
    mpq_class b2 = b2_start;  // B^2
    std::optional<IntPoly> first_hit;
    bool budget_hit = false;
    while (!first_hit) {
        mpq_class t2 = pow_mpq(b2, static_cast<unsigned long>(d));
        enumerate_candidates_t2(
            d, t2, /*reduce_symmetry=*/true,
            [&](const IntPoly& f) {
                if (cert.candidates_scanned > budget.max_candidates ||
                    elapsed() > budget.max_seconds) {
                    budget_hit = true;
                    return false;
                }
                if (defines(f)) {
                    first_hit = f;
                    return false;
                }
                return true;
            },
            &cert.candidates_scanned);
        if (first_hit || budget_hit) break;
        b2 *= 2;
        if (b2.get_d() > budget.max_b2) {
            budget_hit = true;
            break;
        }
    }
    if (!first_hit) {
        cert.exhaustive = false;
        cert.bound_t2 = pow_mpq(b2, static_cast<unsigned long>(d));
        cert.wall_seconds = elapsed();
        return cert;
    }

    // phase 2: certification scan over M^2 <= (found M)^2
    LogHeight h0 = LogHeight::of_algebraic(*first_hit, true);
    mpq_class t2cert;
    if (h0.exact_mahler()) {
        t2cert = (*h0.exact_mahler()) * (*h0.exact_mahler());
    } else {
        mpq_class hi = h0.mahler(96).hi.to_mpq();
        t2cert = hi * hi;
    }
    auto scan = northdetail::scan_min(K, t2cert, defines, budget, t0, cert.candidates_scanned);
    cert.candidates_scanned += scan.scanned;
    northdetail::BestCandidate best = scan.best;
    best.offer(*first_hit);
    cert.generator = best.poly;
    cert.height = best.height;
    cert.bound_t2 = t2cert;
    cert.exhaustive = !scan.budget_hit && !budget_hit;
    cert.wall_seconds = elapsed();
    return cert;
}

struct GeneratorSearchResult {
    std::optional<IntPoly> generator;
    std::optional<LogHeight> height;
    bool exhaustive = false;
    unsigned long candidates_scanned = 0;
};

// Least-height generator with M(gen)^2 <= t2 (i.e. H <= t2^(1/2d)), or none.
inline GeneratorSearchResult find_generator_below_t2(const FieldPtr& K, const mpq_class& t2,
                                                     const EnumerationBudget& budget = {}) {
    auto t0 = std::chrono::steady_clock::now();
    GeneratorSearchResult out;
    if (t2 < 1) throw std::invalid_argument("find_generator_below: bound must be >= 1");
    auto defines = northdetail::defines_tester(K);
    auto scan = northdetail::scan_min(K, t2, defines, budget, t0, 0);
    out.generator = scan.best.poly;
    out.height = scan.best.height;
    out.candidates_scanned = scan.scanned;
    out.exhaustive = !scan.budget_hit;
    return out;
}

// ----------------------------------------------- best integer combination

struct CombinationResult {
    mpz_class a, b;
    IntPoly minpoly;          // of a*alpha + b*beta (designated roots)
    LogHeight height;
    int compositum_degree = 0;
    bool height_bound_ok = false;  // H(gamma) <= 2 d^2 H(alpha) H(beta)
};

// Scan 0 <= a, b < deg(f_alpha) * deg(f_beta), keep the pairs realizing the
// full compositum degree, and return the one of minimal height.
inline CombinationResult best_integer_combination(const IntPoly& fa0, const IntPoly& fb0) {
    IntPoly fa = fa0.primitive_part(), fb = fb0.primitive_part();
    if (!is_irreducible_q(fa) || !is_irreducible_q(fb))
        throw std::invalid_argument("best_integer_combination: inputs must be irreducible");
    const int D = fa.degree() * fb.degree();

    int dmax = 0;
    std::vector<std::tuple<mpz_class, mpz_class, IntPoly>> full;
    for (int a = 0; a < D; ++a) {
        for (int b = 0; b < D; ++b) {
            if (a == 0 && b == 0) continue;
            IntPoly m = minpoly_of_combination(fa, fb, a, b, /*assume_irreducible=*/true);
            if (m.degree() > dmax) {
                dmax = m.degree();
                full.clear();
            }
            if (m.degree() == dmax) full.emplace_back(a, b, m);
        }
    }
    if (full.empty()) throw consistency_error("best_integer_combination: no generating pair");

    northdetail::BestCandidate best;
    mpz_class ba = 0, bb = 0;
    for (auto& [a, b, m] : full) {
        LogHeight h = LogHeight::of_algebraic(m, true);
        if (!best.poly) {
            best.poly = m;
            best.height = h;
            ba = a;
            bb = b;
            continue;
        }
        Ordering c = compare(h, *best.height);
        if (c == Ordering::Less || (c == Ordering::Equal && lex_less(m, *best.poly))) {
            best.poly = m;
            best.height = h;
            ba = a;
            bb = b;
        }
    }

    CombinationResult out{ba, bb, *best.poly, *best.height, dmax, false};

    // H(gamma) <= 2 d^2 H(alpha) H(beta):
    // deg-scaled exact form when all three measures are rational, else
    // enclosure comparison of the logs
    LogHeight halpha = LogHeight::of_algebraic(fa, true);
    LogHeight hbeta = LogHeight::of_algebraic(fb, true);
    mpq_class c2d2(2 * dmax * dmax);
    if (out.height.exact_mahler() && halpha.exact_mahler() && hbeta.exact_mahler()) {
        // M_g^(1/dg) <= c * M_a^(1/da) * M_b^(1/db); raise to lcm power L
        unsigned long dg = static_cast<unsigned long>(out.minpoly.degree());
        unsigned long da = static_cast<unsigned long>(fa.degree());
        unsigned long db = static_cast<unsigned long>(fb.degree());
        unsigned long L = std::lcm(std::lcm(da, db), dg);
        mpq_class lhs = pow_mpq(*out.height.exact_mahler(), L / dg);
        mpq_class rhs = pow_mpq(c2d2, L) * pow_mpq(*halpha.exact_mahler(), L / da) *
                        pow_mpq(*hbeta.exact_mahler(), L / db);
        out.height_bound_ok = lhs <= rhs;
    } else {
        for (long w : {80L, 128L, 256L}) {
            unsigned long prec = static_cast<unsigned long>(w) + 32;
            RealEnclosure lhs = out.height.log_value(w);
            RealEnclosure rhs = halpha.log_value(w) + hbeta.log_value(w) +
                                log_of_mpq(c2d2, prec);
            if (certainly_le(lhs, rhs)) {
                out.height_bound_ok = true;
                break;
            }
            if (certainly_lt(rhs, lhs)) break;
        }
    }
    return out;
}

}  // namespace smallgen
