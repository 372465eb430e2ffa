#pragma once

#include <optional>
#include <vector>

#include "smallgen/dyadic.hpp"
#include "smallgen/intpoly.hpp"
#include "smallgen/roots.hpp"

namespace smallgen {

// Mahler measure M(f) = |lead(f)| * prod max(1, |rho_i|) as a certified
// enclosure, with exact detection in the decidable cases:
//   - every root strictly inside the unit circle  -> M = |lead|
//   - every root strictly outside                 -> M = |constant term|
//   - product of cyclotomics (up to sign, x^k)    -> M = 1  (Kronecker)

struct MahlerResult {
    RealEnclosure measure;
    std::optional<mpq_class> exact;  // set when M is provably this rational
    bool exact_one = false;
};

namespace mahlerdetail {

// Number of roots of h lying exactly on the unit circle, certified
// symbolically.  Such roots are common to h and its reversal, and for the
// (palindromic) common part r(x) = x^m G(x + 1/x) they correspond to the
// real roots of G in (-2, 2).  Assumes h squarefree with h(+-1) != 0 (true
// after cyclotomic factors are stripped).
inline int on_circle_root_count(const IntPoly& h) {
    IntPoly r = gcd_z(h, reverse_poly(h)).primitive_part();
    if (r.degree() <= 0) return 0;
    if (r != reverse_poly(r).primitive_part())
        throw consistency_error("on_circle_root_count: reciprocal part not palindromic");
    if (r.degree() % 2 != 0)
        throw consistency_error("on_circle_root_count: odd reciprocal part (root at -1?)");
    int m = r.degree() / 2;
    // G(y) = a_m + sum_{k>=1} a_{m+k} C_k(y), C_k(y) = x^k + x^-k in y = x + 1/x
    IntPoly g = IntPoly::constant(r.coeff(m));
    IntPoly ckm1 = IntPoly::constant(2);  // C_0
    IntPoly ck({0, 1});                   // C_1 = y
    for (int k = 1; k <= m; ++k) {
        g = g + ck * r.coeff(m + k);
        IntPoly next = IntPoly({0, 1}) * ck - ckm1;  // C_{k+1} = y C_k - C_{k-1}
        ckm1 = std::move(ck);
        ck = std::move(next);
    }
    auto chain = sturm_chain(g);
    return 2 * count_real_roots_in(chain, mpq_class(-2), mpq_class(2));
}

// M(h)^2 enclosure for a primitive squarefree h with cyclotomic factors
// removed.  Roots certified on the unit circle contribute exactly 1, so
// all-inside / all-outside configurations give exact rational measures.
inline MahlerResult measure_squarefree(const IntPoly& h, const Dyadic& target_width) {
    MahlerResult out;
    if (h.degree() == 0) {
        mpq_class v = abs(mpq_class(h.coeff(0)));
        out.exact = v;
        out.exact_one = (v == 1);
        out.measure = RealEnclosure::of_mpq(v);
        return out;
    }
    const int n_circle = on_circle_root_count(h);
    Dyadic w = Dyadic(mpz_class(1), -64);
    std::optional<RealEnclosure> prev;
    while (true) {
        auto boxes = complex_roots(h, w);
        int n_in = 0, n_out = 0;
        std::vector<RealEnclosure> out_abs2;
        int n_ambiguous = 0;
        for (const auto& b : boxes) {
            RealEnclosure a2 = b.abs2();
            if (a2.hi < Dyadic(1)) {
                ++n_in;
            } else if (a2.lo > Dyadic(1)) {
                ++n_out;
                out_abs2.push_back(a2);
            } else {
                ++n_ambiguous;
            }
        }
        if (n_ambiguous == n_circle) {
            // every straddling box holds an exactly-on-circle root
            if (n_out == 0) {
                mpq_class v = abs(mpq_class(h.lead()));
                out.exact = v;
                out.exact_one = (v == 1);
                out.measure = RealEnclosure::of_mpq(v);
                return out;
            }
            if (n_in == 0) {
                mpq_class v = abs(mpq_class(h.coeff(0)));
                out.exact = v;
                out.exact_one = (v == 1);
                out.measure = RealEnclosure::of_mpq(v);
                return out;
            }
            RealEnclosure m2 = RealEnclosure::point(Dyadic(h.lead() * h.lead()));
            for (const auto& a2 : out_abs2) m2 = m2 * a2;
            unsigned long sqrt_prec = 256;
            if (target_width.exp < 0)
                sqrt_prec = std::max<unsigned long>(
                    256, static_cast<unsigned long>(-target_width.exp) + m2.hi.bits() + 32);
            RealEnclosure m = sqrt_encl(m2, sqrt_prec);
            Dyadic lead_abs = Dyadic(abs(h.lead()));
            if (m.lo < lead_abs) m = RealEnclosure(lead_abs, std::max(m.hi, lead_abs));
            if (prev) {
                auto isect = m.intersect(*prev);
                if (isect) m = *isect;
            }
            prev = m;
            if (m.width() <= target_width) {
                out.measure = m;
                return out;
            }
        }
        if (w.exp < -8192) throw precision_error("mahler_measure: width target unreachable");
        w = mul_2exp(w, -48);
    }
}

// strip cyclotomic factors and powers of x from a primitive polynomial;
// returns the non-cyclotomic remainder (possibly constant)
inline IntPoly strip_cyclotomic(const IntPoly& part) {
    IntPoly f = part;
    size_t v = 0;
    while (f.coeff(static_cast<int>(v)) == 0) ++v;
    if (v > 0) {
        std::vector<mpz_class> c(f.coeffs().begin() + static_cast<long>(v), f.coeffs().end());
        f = IntPoly(std::move(c));
    }
    int deg = f.degree();
    if (deg == 0) return f;
    unsigned long bound = 2ul * static_cast<unsigned long>(deg) * static_cast<unsigned long>(deg) + 6;
    for (unsigned long k = 1; k <= bound && f.degree() > 0; ++k) {
        if (euler_phi_u64(k) > static_cast<unsigned long>(f.degree())) continue;
        IntPoly phi = cyclotomic(k);
        while (f.degree() >= phi.degree()) {
            auto q = try_divide(f, phi);
            if (!q) break;
            f = *q;
        }
    }
    return f;
}

}  // namespace mahlerdetail

inline MahlerResult mahler_measure(const IntPoly& f, const Dyadic& target_width = default_root_width()) {
    if (f.is_zero()) throw std::invalid_argument("mahler_measure: zero polynomial");
    auto sf = squarefree_decomposition(f);

    int total_mult = 1;
    for (auto& [p, m] : sf.parts) total_mult += m * std::max(1, p.degree());

    for (long attempt = 0;; ++attempt) {
        mpq_class exact_acc = abs(mpq_class(sf.unit));
        bool exact_ok = true;
        RealEnclosure acc = RealEnclosure::of_mpq(exact_acc);
        Dyadic part_width =
            mul_2exp(target_width, -(16 + 2 * static_cast<long>(total_mult) + 32 * attempt));

        for (auto& [part, mult] : sf.parts) {
            IntPoly rest = mahlerdetail::strip_cyclotomic(part);
            MahlerResult pr;
            if (rest.degree() == 0) {
                // entire part cyclotomic (times a unit constant)
                pr.exact = abs(mpq_class(rest.coeff(0)));
                pr.measure = RealEnclosure::of_mpq(*pr.exact);
            } else {
                pr = mahlerdetail::measure_squarefree(rest, part_width);
            }
            for (int i = 0; i < mult; ++i) {
                acc = acc * pr.measure;
                if (pr.exact && exact_ok)
                    exact_acc *= *pr.exact;
                else
                    exact_ok = false;
            }
            if (!pr.exact) exact_ok = false;
        }

        MahlerResult out;
        if (exact_ok) {
            out.exact = exact_acc;
            out.exact_one = (exact_acc == 1);
            out.measure = RealEnclosure::of_mpq(exact_acc);
            return out;
        }
        // M >= 1 always (integer coefficients, |lead| >= 1)
        if (acc.lo < Dyadic(1)) acc = RealEnclosure(Dyadic(1), std::max(acc.hi, Dyadic(1)));
        if (acc.width() <= target_width) {
            out.measure = acc;
            return out;
        }
        if (attempt > 64) throw precision_error("mahler_measure: width target unreachable");
    }
}

}  // namespace smallgen
