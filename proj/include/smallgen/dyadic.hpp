#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "smallgen/errors.hpp"

namespace smallgen {

// ------------------------------------------------------------------ Dyadic
//
// Exact dyadic rational man * 2^exp.  Addition, subtraction and
// multiplication are exact; rounding happens only where explicitly
// requested (round_down / round_up / sqrt / transcendental enclosures).

struct Dyadic {
    mpz_class man;
    long exp = 0;

    Dyadic() = default;
    Dyadic(long v) : man(v) { normalize(); }
    explicit Dyadic(mpz_class m, long e = 0) : man(std::move(m)), exp(e) { normalize(); }

    void normalize() {
        if (man == 0) {
            exp = 0;
            return;
        }
        unsigned long tz = mpz_scan1(man.get_mpz_t(), 0);
        if (tz > 0) {
            mpz_fdiv_q_2exp(man.get_mpz_t(), man.get_mpz_t(), tz);
            exp += static_cast<long>(tz);
        }
    }

    bool is_zero() const { return man == 0; }
    int sign() const { return sgn(man); }

    // Number of bits in the mantissa.
    unsigned long bits() const {
        return man == 0 ? 0 : mpz_sizeinbase(man.get_mpz_t(), 2);
    }

    mpq_class to_mpq() const {
        mpq_class q(man);
        if (exp >= 0) {
            mpz_mul_2exp(q.get_num().get_mpz_t(), q.get_num().get_mpz_t(),
                         static_cast<unsigned long>(exp));
        } else {
            mpz_mul_2exp(q.get_den().get_mpz_t(), q.get_den().get_mpz_t(),
                         static_cast<unsigned long>(-exp));
        }
        q.canonicalize();
        return q;
    }

    double to_double() const { return to_mpq().get_d(); }
};

inline Dyadic operator-(const Dyadic& a) { return Dyadic(-a.man, a.exp); }

inline Dyadic abs(const Dyadic& a) { return Dyadic(abs(a.man), a.exp); }

inline Dyadic mul_2exp(const Dyadic& a, long k) {
    if (a.is_zero()) return a;
    return Dyadic(a.man, a.exp + k);
}

inline Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    long e = std::min(a.exp, b.exp);
    mpz_class ma = a.man, mb = b.man;
    if (a.exp > e) mpz_mul_2exp(ma.get_mpz_t(), ma.get_mpz_t(), static_cast<unsigned long>(a.exp - e));
    if (b.exp > e) mpz_mul_2exp(mb.get_mpz_t(), mb.get_mpz_t(), static_cast<unsigned long>(b.exp - e));
    return Dyadic(ma + mb, e);
}

inline Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

inline Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.man * b.man, a.exp + b.exp);
}

inline int cmp(const Dyadic& a, const Dyadic& b) {
    if (int sa = a.sign(), sb = b.sign(); sa != sb) return sa < sb ? -1 : 1;
    return (a - b).sign();
}

inline bool operator<(const Dyadic& a, const Dyadic& b) { return cmp(a, b) < 0; }
inline bool operator<=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) <= 0; }
inline bool operator>(const Dyadic& a, const Dyadic& b) { return cmp(a, b) > 0; }
inline bool operator>=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) >= 0; }
inline bool operator==(const Dyadic& a, const Dyadic& b) { return cmp(a, b) == 0; }
inline bool operator!=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) != 0; }

// man*2^e vs num/den, den > 0.  Exact.
inline int cmp(const Dyadic& a, const mpq_class& r) {
    mpz_class lhs = a.man * r.get_den();
    mpz_class rhs = r.get_num();
    if (a.exp >= 0)
        mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<unsigned long>(a.exp));
    else
        mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<unsigned long>(-a.exp));
    return cmp(lhs, rhs);
}

// Keep at most `prec` mantissa bits, rounding toward -inf / +inf.
inline Dyadic round_down(const Dyadic& a, unsigned long prec) {
    unsigned long b = a.bits();
    if (b <= prec) return a;
    unsigned long shift = b - prec;
    mpz_class q;
    mpz_fdiv_q_2exp(q.get_mpz_t(), a.man.get_mpz_t(), shift);
    return Dyadic(q, a.exp + static_cast<long>(shift));
}

inline Dyadic round_up(const Dyadic& a, unsigned long prec) {
    unsigned long b = a.bits();
    if (b <= prec) return a;
    unsigned long shift = b - prec;
    mpz_class q;
    mpz_cdiv_q_2exp(q.get_mpz_t(), a.man.get_mpz_t(), shift);
    return Dyadic(q, a.exp + static_cast<long>(shift));
}

// ------------------------------------------------------------- MPFR bridge

// Minimal RAII wrapper; used only inside enclosure computations.
class Mpfr {
  public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(x_, std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN)); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    Mpfr(Mpfr&& o) noexcept {
        mpfr_init2(x_, mpfr_get_prec(o.x_));
        mpfr_swap(x_, o.x_);
    }
    ~Mpfr() { mpfr_clear(x_); }
    mpfr_ptr get() { return x_; }
    mpfr_srcptr get() const { return x_; }

  private:
    mpfr_t x_;
};

inline Mpfr to_mpfr_exact(const Dyadic& d) {
    Mpfr m(static_cast<mpfr_prec_t>(std::max<unsigned long>(d.bits(), 2)));
    mpfr_set_z(m.get(), d.man.get_mpz_t(), MPFR_RNDN);  // exact: prec >= bits
    mpfr_mul_2si(m.get(), m.get(), d.exp, MPFR_RNDN);   // exact
    return m;
}

inline Dyadic dyadic_from_mpfr(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return Dyadic();
    if (!mpfr_number_p(x)) throw consistency_error("dyadic_from_mpfr: non-finite");
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    return Dyadic(m, static_cast<long>(e));
}

// ----------------------------------------------------------- RealEnclosure
//
// Closed interval [lo, hi] of dyadic rationals certified to contain a real
// value.  Refinement must only ever shrink it.

struct RealEnclosure {
    Dyadic lo, hi;

    RealEnclosure() = default;
    RealEnclosure(Dyadic l, Dyadic h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw consistency_error("RealEnclosure: lo > hi");
    }

    static RealEnclosure point(const Dyadic& d) { return RealEnclosure(d, d); }
    static RealEnclosure point(long v) { return point(Dyadic(v)); }

    static RealEnclosure of_mpq(const mpq_class& q, unsigned long prec = 0) {
        // Outward dyadic enclosure of an exact rational.  prec = 0 picks a
        // precision that makes dyadically-representable inputs exact.
        if (prec == 0)
            prec = mpz_sizeinbase(q.get_num().get_mpz_t(), 2) +
                   mpz_sizeinbase(q.get_den().get_mpz_t(), 2) + 16;
        Mpfr m(static_cast<mpfr_prec_t>(prec));
        mpfr_set_q(m.get(), q.get_mpq_t(), MPFR_RNDD);
        Dyadic l = dyadic_from_mpfr(m.get());
        mpfr_set_q(m.get(), q.get_mpq_t(), MPFR_RNDU);
        Dyadic h = dyadic_from_mpfr(m.get());
        return RealEnclosure(l, h);
    }

    bool is_point() const { return lo == hi; }
    Dyadic width() const { return hi - lo; }
    Dyadic mid() const { return mul_2exp(lo + hi, -1); }
    bool contains(const Dyadic& d) const { return lo <= d && d <= hi; }
    bool contains(const mpq_class& q) const { return cmp(lo, q) <= 0 && cmp(hi, q) >= 0; }
    bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }

    // True once the width drops below 2^-k.
    bool width_below(long k) const { return cmp(width(), Dyadic(mpz_class(1), -k)) < 0; }

    RealEnclosure rounded(unsigned long prec) const {
        return RealEnclosure(round_down(lo, prec), round_up(hi, prec));
    }

    std::optional<RealEnclosure> intersect(const RealEnclosure& o) const {
        Dyadic l = std::max(lo, o.lo, [](const Dyadic& a, const Dyadic& b) { return a < b; });
        Dyadic h = std::min(hi, o.hi, [](const Dyadic& a, const Dyadic& b) { return a < b; });
        if (l > h) return std::nullopt;
        return RealEnclosure(l, h);
    }
};

inline RealEnclosure operator+(const RealEnclosure& a, const RealEnclosure& b) {
    return RealEnclosure(a.lo + b.lo, a.hi + b.hi);
}

inline RealEnclosure operator-(const RealEnclosure& a) {
    return RealEnclosure(-a.hi, -a.lo);
}

inline RealEnclosure operator-(const RealEnclosure& a, const RealEnclosure& b) {
    return a + (-b);
}

inline RealEnclosure operator*(const RealEnclosure& a, const RealEnclosure& b) {
    Dyadic p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    Dyadic l = std::min({p1, p2, p3, p4});
    Dyadic h = std::max({p1, p2, p3, p4});
    return RealEnclosure(l, h);
}

inline RealEnclosure operator*(const RealEnclosure& a, const Dyadic& d) {
    return a * RealEnclosure::point(d);
}

// Interval square; tighter than a*a when the interval straddles zero.
inline RealEnclosure square(const RealEnclosure& a) {
    Dyadic l2 = a.lo * a.lo, h2 = a.hi * a.hi;
    if (a.contains_zero()) return RealEnclosure(Dyadic(0), std::max(l2, h2));
    return RealEnclosure(std::min(l2, h2), std::max(l2, h2));
}

inline RealEnclosure max_with_one(const RealEnclosure& a) {
    Dyadic one(1);
    return RealEnclosure(std::max(a.lo, one), std::max(a.hi, one));
}

// a certainly less than b (every point of a below every point of b).
inline bool certainly_lt(const RealEnclosure& a, const RealEnclosure& b) { return a.hi < b.lo; }
inline bool certainly_le(const RealEnclosure& a, const RealEnclosure& b) { return a.hi <= b.lo; }

// ---- outward-rounded transcendental / algebraic maps via MPFR ----

inline Dyadic sqrt_dir(const Dyadic& x, unsigned long prec, mpfr_rnd_t rnd) {
    if (x.sign() < 0) throw consistency_error("sqrt of negative dyadic");
    Mpfr in = to_mpfr_exact(x);
    Mpfr out(static_cast<mpfr_prec_t>(prec));
    mpfr_sqrt(out.get(), in.get(), rnd);
    return dyadic_from_mpfr(out.get());
}

inline RealEnclosure sqrt_encl(const RealEnclosure& a, unsigned long prec) {
    Dyadic lo = a.lo.sign() < 0 ? Dyadic(0) : a.lo;  // clamp tiny negatives from rounding
    return RealEnclosure(sqrt_dir(lo, prec, MPFR_RNDD), sqrt_dir(a.hi, prec, MPFR_RNDU));
}

inline Dyadic sqrt_mpq_dir(const mpq_class& q, unsigned long prec, mpfr_rnd_t rnd) {
    Mpfr in(static_cast<mpfr_prec_t>(
        mpz_sizeinbase(q.get_num().get_mpz_t(), 2) + mpz_sizeinbase(q.get_den().get_mpz_t(), 2) + 4));
    mpfr_set_q(in.get(), q.get_mpq_t(), rnd);  // directed; safe for one-sided bound
    Mpfr out(static_cast<mpfr_prec_t>(prec));
    mpfr_sqrt(out.get(), in.get(), rnd);
    return dyadic_from_mpfr(out.get());
}

inline Dyadic log_dir(const Dyadic& x, unsigned long prec, mpfr_rnd_t rnd) {
    if (x.sign() <= 0) throw consistency_error("log of non-positive dyadic");
    Mpfr in = to_mpfr_exact(x);
    Mpfr out(static_cast<mpfr_prec_t>(prec));
    mpfr_log(out.get(), in.get(), rnd);
    return dyadic_from_mpfr(out.get());
}

inline RealEnclosure log_encl(const RealEnclosure& a, unsigned long prec) {
    if (a.lo.sign() <= 0) throw consistency_error("log_encl: interval touches 0");
    return RealEnclosure(log_dir(a.lo, prec, MPFR_RNDD), log_dir(a.hi, prec, MPFR_RNDU));
}

inline RealEnclosure log_of_mpq(const mpq_class& q, unsigned long prec) {
    if (sgn(q) <= 0) throw consistency_error("log_of_mpq: non-positive");
    Mpfr in(static_cast<mpfr_prec_t>(
        mpz_sizeinbase(q.get_num().get_mpz_t(), 2) + mpz_sizeinbase(q.get_den().get_mpz_t(), 2) + 4));
    Mpfr out(static_cast<mpfr_prec_t>(prec));
    mpfr_set_q(in.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_log(out.get(), in.get(), MPFR_RNDD);
    Dyadic l = dyadic_from_mpfr(out.get());
    mpfr_set_q(in.get(), q.get_mpq_t(), MPFR_RNDU);
    mpfr_log(out.get(), in.get(), MPFR_RNDU);
    Dyadic h = dyadic_from_mpfr(out.get());
    return RealEnclosure(l, h);
}

// Enclosure of pi.
inline RealEnclosure pi_encl(unsigned long prec) {
    Mpfr out(static_cast<mpfr_prec_t>(prec));
    mpfr_const_pi(out.get(), MPFR_RNDD);
    Dyadic l = dyadic_from_mpfr(out.get());
    mpfr_const_pi(out.get(), MPFR_RNDU);
    Dyadic h = dyadic_from_mpfr(out.get());
    return RealEnclosure(l, h);
}

// sin/cos on a narrow interval: evaluate at the midpoint and widen by the
// interval radius (both have Lipschitz constant 1) plus one ulp.
inline RealEnclosure sin_encl(const RealEnclosure& a, unsigned long prec) {
    Dyadic m = a.mid();
    Mpfr in = to_mpfr_exact(m);
    Mpfr out(static_cast<mpfr_prec_t>(prec));
    mpfr_sin(out.get(), in.get(), MPFR_RNDD);
    Dyadic l = dyadic_from_mpfr(out.get());
    mpfr_sin(out.get(), in.get(), MPFR_RNDU);
    Dyadic h = dyadic_from_mpfr(out.get());
    Dyadic rad = mul_2exp(a.width(), -1) + Dyadic(mpz_class(1), -static_cast<long>(prec));
    return RealEnclosure(l - rad, h + rad);
}

inline RealEnclosure cos_encl(const RealEnclosure& a, unsigned long prec) {
    Dyadic m = a.mid();
    Mpfr in = to_mpfr_exact(m);
    Mpfr out(static_cast<mpfr_prec_t>(prec));
    mpfr_cos(out.get(), in.get(), MPFR_RNDD);
    Dyadic l = dyadic_from_mpfr(out.get());
    mpfr_cos(out.get(), in.get(), MPFR_RNDU);
    Dyadic h = dyadic_from_mpfr(out.get());
    Dyadic rad = mul_2exp(a.width(), -1) + Dyadic(mpz_class(1), -static_cast<long>(prec));
    return RealEnclosure(l - rad, h + rad);
}

// ------------------------------------------------------------- ComplexBox

struct ComplexBox {
    RealEnclosure re, im;

    ComplexBox() = default;
    ComplexBox(RealEnclosure r, RealEnclosure i) : re(std::move(r)), im(std::move(i)) {}

    static ComplexBox point(const Dyadic& r, const Dyadic& i) {
        return ComplexBox(RealEnclosure::point(r), RealEnclosure::point(i));
    }

    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }

    // Exact enclosure of |z|^2.
    RealEnclosure abs2() const { return square(re) + square(im); }

    ComplexBox rounded(unsigned long prec) const {
        return ComplexBox(re.rounded(prec), im.rounded(prec));
    }

    std::optional<ComplexBox> intersect(const ComplexBox& o) const {
        auto r = re.intersect(o.re);
        auto i = im.intersect(o.im);
        if (!r || !i) return std::nullopt;
        return ComplexBox(*r, *i);
    }

    ComplexBox conj() const { return ComplexBox(re, -im); }
};

inline ComplexBox operator+(const ComplexBox& a, const ComplexBox& b) {
    return ComplexBox(a.re + b.re, a.im + b.im);
}

inline ComplexBox operator-(const ComplexBox& a, const ComplexBox& b) {
    return ComplexBox(a.re - b.re, a.im - b.im);
}

inline ComplexBox operator*(const ComplexBox& a, const ComplexBox& b) {
    return ComplexBox(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

inline ComplexBox operator*(const ComplexBox& a, const Dyadic& d) {
    RealEnclosure s = RealEnclosure::point(d);
    return ComplexBox(a.re * s, a.im * s);
}

// -------------------------------------------------------------- DyComplex
//
// Exact dyadic complex point; used for a-posteriori root certificates where
// polynomial evaluation must be exact.

struct DyComplex {
    Dyadic re, im;

    DyComplex() = default;
    DyComplex(Dyadic r, Dyadic i) : re(std::move(r)), im(std::move(i)) {}

    mpq_class abs2_mpq() const { return (re * re + im * im).to_mpq(); }
};

inline DyComplex operator+(const DyComplex& a, const DyComplex& b) {
    return DyComplex(a.re + b.re, a.im + b.im);
}

inline DyComplex operator-(const DyComplex& a, const DyComplex& b) {
    return DyComplex(a.re - b.re, a.im - b.im);
}

inline DyComplex operator*(const DyComplex& a, const DyComplex& b) {
    return DyComplex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

// Decimal rendering of an enclosure midpoint (display only, never used in
// decisions).  `digits` significant digits.
inline std::string decimal_string(const Dyadic& d, int digits = 20) {
    Mpfr m = to_mpfr_exact(d);
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, m.get());
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

}  // namespace smallgen
