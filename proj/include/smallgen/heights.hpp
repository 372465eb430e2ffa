#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "smallgen/factorq.hpp"
#include "smallgen/mahler.hpp"

namespace smallgen {

enum class Ordering { Less, Equal, Greater };

// Canonical representative of a polynomial under the height-preserving maps
// f(x) -> +-f(+-x) and coefficient reversal (alpha -> -alpha, 1/alpha):
// the lexicographically smallest primitive positive-lead image.
inline IntPoly height_orbit_canonical(const IntPoly& f0) {
    IntPoly f = f0.primitive_part();
    IntPoly best = f;
    auto consider = [&](const IntPoly& g) {
        IntPoly p = g.primitive_part();
        if (cmp(p, best) < 0) best = p;
    };
    IntPoly r = reverse_poly(f);
    consider(compose_neg(f));
    if (r.degree() == f.degree()) {  // reversal only height-preserving when a_0 != 0
        consider(r);
        consider(compose_neg(r));
    }
    return best;
}

// Absolute multiplicative Weil height in log form.  Stores the primitive
// minimal polynomial as provenance along with its Mahler-measure enclosure;
// deg * log H = log M by construction.
class LogHeight {
    struct State {
        IntPoly minpoly;
        IntPoly canonical;
        std::optional<mpq_class> exact_mahler;
        bool exact_one = false;
        // cached enclosure of M at `width_exp` (absolute width 2^-width_exp)
        long width_exp = 0;
        RealEnclosure measure;
        std::mutex mu;
    };

  public:
    LogHeight() = default;

    // f must be irreducible; set assume_irreducible when the caller has
    // already certified that.
    static LogHeight of_algebraic(const IntPoly& f, bool assume_irreducible = false) {
        if (f.degree() < 1) throw std::invalid_argument("height: degree must be >= 1");
        IntPoly p = f.primitive_part();
        if (!assume_irreducible && !is_irreducible_q(p))
            throw std::invalid_argument("height: polynomial is reducible");
        LogHeight h;
        h.st_ = std::make_shared<State>();
        h.st_->minpoly = p;
        h.st_->canonical = height_orbit_canonical(p);
        MahlerResult m = mahler_measure(p, Dyadic(mpz_class(1), -80));
        h.st_->exact_mahler = m.exact;
        h.st_->exact_one = m.exact_one;
        h.st_->width_exp = 80;
        h.st_->measure = m.measure;
        return h;
    }

    // H(p/q) = max(|p|, |q|) in lowest terms; exact.
    static LogHeight of_rational(const mpq_class& r0) {
        mpq_class r = r0;
        r.canonicalize();
        IntPoly p({mpz_class(-r.get_num()), mpz_class(r.get_den())});
        if (r == 0) p = IntPoly({0, 1});
        return of_algebraic(p.primitive_part(), true);
    }

    bool valid() const { return static_cast<bool>(st_); }
    const IntPoly& minpoly() const { return st_->minpoly; }
    const IntPoly& canonical() const { return st_->canonical; }
    int degree() const { return st_->minpoly.degree(); }
    bool exact_one() const { return st_->exact_one; }
    const std::optional<mpq_class>& exact_mahler() const { return st_->exact_mahler; }

    // H = max(|num|,|den|) when the minimal polynomial is linear.
    std::optional<mpq_class> exact_height_rational() const {
        if (st_->exact_mahler && degree() == 1) return *st_->exact_mahler;
        if (st_->exact_mahler && degree() >= 1) {
            // H = M^(1/deg): rational only if M is a perfect deg-th power
            mpz_class num = st_->exact_mahler->get_num(), den = st_->exact_mahler->get_den();
            mpz_class rn, rd;
            if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(degree())) &&
                mpz_root(rd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(degree())))
                return mpq_class(rn, rd);
        }
        return std::nullopt;
    }

    // Enclosure of M(minpoly) with absolute width <= 2^-width_exp.
    RealEnclosure mahler(long width_exp = 80) const {
        std::lock_guard<std::mutex> lock(st_->mu);
        if (st_->exact_mahler) return RealEnclosure::of_mpq(*st_->exact_mahler);
        if (width_exp <= st_->width_exp) return st_->measure;
        MahlerResult m = mahler_measure(st_->minpoly, Dyadic(mpz_class(1), -width_exp));
        auto isect = m.measure.intersect(st_->measure);
        st_->measure = isect ? *isect : m.measure;
        st_->width_exp = width_exp;
        return st_->measure;
    }

    // Enclosure of log H = log(M)/deg.
    RealEnclosure log_value(long width_exp = 80) const {
        if (st_->exact_one) return RealEnclosure::point(Dyadic(0));
        unsigned long prec = static_cast<unsigned long>(width_exp) + 32;
        RealEnclosure m = st_->exact_mahler ? log_of_mpq(*st_->exact_mahler, prec)
                                            : log_encl(mahler(width_exp), prec);
        // divide by deg: scale by the dyadic-exact reciprocal is not exact
        // for general deg, so bound the quotient outward
        mpq_class lo = m.lo.to_mpq() / degree();
        mpq_class hi = m.hi.to_mpq() / degree();
        RealEnclosure le = RealEnclosure::of_mpq(lo, prec);
        RealEnclosure he = RealEnclosure::of_mpq(hi, prec);
        return RealEnclosure(le.lo, he.hi);
    }

  private:
    std::shared_ptr<State> st_;
};

// Certified three-way comparison; throws undecided_error if the heights
// cannot be separated at 2^-256 and no exactness certificate applies.
inline Ordering compare(const LogHeight& a, const LogHeight& b) {
    if (a.canonical() == b.canonical()) return Ordering::Equal;
    if (a.exact_one() && b.exact_one()) return Ordering::Equal;
    if (a.exact_mahler() && b.exact_mahler()) {
        // H_a ? H_b  <=>  M_a^(L/da) ? M_b^(L/db),  L = lcm(da, db)
        unsigned long da = static_cast<unsigned long>(a.degree());
        unsigned long db = static_cast<unsigned long>(b.degree());
        unsigned long l = da / std::__gcd(da, db) * db;
        mpq_class pa = pow_mpq(*a.exact_mahler(), l / da);
        mpq_class pb = pow_mpq(*b.exact_mahler(), l / db);
        int c = cmp(pa, pb);
        return c < 0 ? Ordering::Less : (c > 0 ? Ordering::Greater : Ordering::Equal);
    }
    for (long w : {80L, 128L, 256L}) {
        RealEnclosure la = a.log_value(w);
        RealEnclosure lb = b.log_value(w);
        if (certainly_lt(la, lb)) return Ordering::Less;
        if (certainly_lt(lb, la)) return Ordering::Greater;
    }
    throw undecided_error("height comparison undecided at 2^-256");
}

// Compare H against base^(num/den) for rational base > 0 and den >= 1.
// Exact when M is; otherwise enclosure refinement with the same budget.
inline Ordering compare_to_power(const LogHeight& h, const mpq_class& base, unsigned long num,
                                 unsigned long den) {
    if (sgn(base) <= 0) throw std::invalid_argument("compare_to_power: base must be positive");
    unsigned long d = static_cast<unsigned long>(h.degree());
    if (h.exact_mahler()) {
        // M^den ? base^(num*d)
        mpq_class lhs = pow_mpq(*h.exact_mahler(), den);
        mpq_class rhs = pow_mpq(base, num * d);
        int c = cmp(lhs, rhs);
        return c < 0 ? Ordering::Less : (c > 0 ? Ordering::Greater : Ordering::Equal);
    }
    for (long w : {80L, 128L, 256L}) {
        unsigned long prec = static_cast<unsigned long>(w) + 32;
        // den * log M ? num * d * log base
        RealEnclosure lm = log_encl(h.mahler(w), prec) * Dyadic(mpz_class(den));
        RealEnclosure rb = log_of_mpq(base, prec) * Dyadic(mpz_class(num * d));
        if (certainly_lt(lm, rb)) return Ordering::Less;
        if (certainly_lt(rb, lm)) return Ordering::Greater;
    }
    throw undecided_error("height/power comparison undecided at 2^-256");
}

inline bool height_le_power(const LogHeight& h, const mpq_class& base, unsigned long num,
                            unsigned long den) {
    return compare_to_power(h, base, num, den) != Ordering::Greater;
}

}  // namespace smallgen
