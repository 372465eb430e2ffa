#pragma once

#include <mpfr.h>

#include <algorithm>
#include <vector>

#include "smallgen/dyadic.hpp"
#include "smallgen/intpoly.hpp"

namespace smallgen {

// Certified complex root isolation.
//
// Real roots are isolated exactly (Sturm chain + sign bisection, all
// arithmetic exact), so their boxes have imaginary part identically zero.
// Non-real roots are approximated by an Aberth iteration in MPFR and then
// certified a posteriori: for any z with f'(z) != 0, at least one root of f
// lies within d*|f(z)/f'(z)| of z (from f'/f = sum 1/(z - rho_i)).  With
// r2 disjoint disks strictly above the real axis, their mirror images
// account for the conjugates, and a pigeonhole count shows each disk holds
// exactly one root.

namespace rootdetail {

// ---- real roots: Sturm isolation + sign bisection ----

struct RealRootIso {
    Dyadic lo, hi;      // closed interval containing exactly one real root
    bool exact = false; // lo == hi, root hit exactly
};

inline int dyadic_sign_eval(const IntPoly& f, const Dyadic& x) {
    Dyadic acc;
    for (size_t i = f.coeffs().size(); i-- > 0;) {
        acc = acc * x + Dyadic(f.coeffs()[i]);
    }
    return acc.sign();
}

inline std::vector<RealRootIso> isolate_real_roots(const IntPoly& f, const Dyadic& target_width) {
    std::vector<RealRootIso> out;
    if (f.degree() < 1) return out;
    auto chain = sturm_chain(f);
    long be = cauchy_root_bound_exp(f);
    Dyadic B(mpz_class(1), be);

    struct Seg {
        Dyadic lo, hi;
        int count;
    };
    auto count_in = [&](const Dyadic& a, const Dyadic& b) {
        return count_real_roots_in(chain, a.to_mpq(), b.to_mpq());
    };
    std::vector<Seg> stack;
    int total = count_in(-B, B);
    if (total > 0) stack.push_back({-B, B, total});

    // split point with f != 0: walk a sequence of distinct dyadics toward
    // lo (a squarefree f has only deg-many roots, so this terminates)
    auto pick_split = [&](const Dyadic& lo, const Dyadic& hi) {
        Dyadic m = mul_2exp(lo + hi, -1);
        Dyadic step = mul_2exp(hi - lo, -2);
        int tries = 0;
        while (dyadic_sign_eval(f, m) == 0) {
            m = m - step;
            step = mul_2exp(step, -1);
            if (++tries > f.degree() + 70)
                throw consistency_error("isolate_real_roots: no root-free split point");
        }
        return m;
    };

    std::vector<RealRootIso> isolated;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.count == 0) continue;
        if (s.count == 1) {
            // endpoints: Sturm counted (lo, hi]; normalize to a sign-change
            // bracket (or an exact hit)
            int slo = dyadic_sign_eval(f, s.lo);
            int shi = dyadic_sign_eval(f, s.hi);
            if (shi == 0) {
                isolated.push_back({s.hi, s.hi, true});
                continue;
            }
            if (slo == 0) {
                // lo itself is a root of the neighboring segment; shrink
                // inward until a sign change brackets the interior root
                Dyadic a = s.lo, b = s.hi;
                while (true) {
                    Dyadic m = mul_2exp(a + b, -1);
                    int sm = dyadic_sign_eval(f, m);
                    if (sm == 0) { isolated.push_back({m, m, true}); break; }
                    if (sm != shi) { isolated.push_back({m, b, false}); break; }
                    b = m;  // root in (a, m]; keep shrinking
                }
                continue;
            }
            if (slo != shi) {
                isolated.push_back({s.lo, s.hi, false});
                continue;
            }
            // same nonzero sign at both ends yet one root inside cannot
            // happen for a squarefree f; defensive re-split
            Dyadic m = pick_split(s.lo, s.hi);
            int cm = count_in(s.lo, m);
            stack.push_back({s.lo, m, cm});
            stack.push_back({m, s.hi, s.count - cm});
            continue;
        }
        Dyadic m = pick_split(s.lo, s.hi);
        int cl = count_in(s.lo, m);
        if (cl > 0) stack.push_back({s.lo, m, cl});
        if (s.count - cl > 0) stack.push_back({m, s.hi, s.count - cl});
    }

    // refine each bracket by sign bisection
    for (auto& r : isolated) {
        if (!r.exact) {
            int slo = dyadic_sign_eval(f, r.lo);
            while (r.hi - r.lo > target_width) {
                Dyadic m = mul_2exp(r.lo + r.hi, -1);
                int sm = dyadic_sign_eval(f, m);
                if (sm == 0) {
                    r.lo = r.hi = m;
                    r.exact = true;
                    break;
                }
                if (sm == slo)
                    r.lo = m;
                else
                    r.hi = m;
            }
        }
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const RealRootIso& a, const RealRootIso& b) {
        return a.lo < b.lo;
    });
    return out;
}

// ---- Aberth iteration in MPFR complex arithmetic ----

struct MpfrC {
    mpfr_t re, im;
};

class AberthWorkspace {
  public:
    AberthWorkspace(const IntPoly& f, mpfr_prec_t prec) : f_(f), prec_(prec), d_(f.degree()) {
        coeff_.resize(static_cast<size_t>(d_) + 1);
        for (auto& c : coeff_) init(c);
        for (int i = 0; i <= d_; ++i) {
            mpfr_set_z(coeff_[static_cast<size_t>(i)].re, f.coeff(i).get_mpz_t(), MPFR_RNDN);
            mpfr_set_ui(coeff_[static_cast<size_t>(i)].im, 0, MPFR_RNDN);
        }
        z_.resize(static_cast<size_t>(d_));
        for (auto& z : z_) init(z);
        for (auto& t : tmp_) init(t);
    }
    AberthWorkspace(const AberthWorkspace&) = delete;
    AberthWorkspace& operator=(const AberthWorkspace&) = delete;
    ~AberthWorkspace() {
        for (auto& c : coeff_) clear(c);
        for (auto& z : z_) clear(z);
        for (auto& t : tmp_) clear(t);
    }

    void run(int max_iters) {
        seed_start_points();
        for (int it = 0; it < max_iters; ++it) {
            if (iterate_once()) break;
        }
    }

    std::vector<DyComplex> approximations() const {
        std::vector<DyComplex> out;
        out.reserve(z_.size());
        for (const auto& z : z_)
            out.emplace_back(dyadic_from_mpfr(z.re), dyadic_from_mpfr(z.im));
        return out;
    }

  private:
    void init(MpfrC& c) {
        mpfr_init2(c.re, prec_);
        mpfr_init2(c.im, prec_);
    }
    void clear(MpfrC& c) {
        mpfr_clear(c.re);
        mpfr_clear(c.im);
    }
    static void cset(MpfrC& a, const MpfrC& b) {
        mpfr_set(a.re, b.re, MPFR_RNDN);
        mpfr_set(a.im, b.im, MPFR_RNDN);
    }
    void cmul(MpfrC& r, const MpfrC& a, const MpfrC& b) {
        // r = a*b; r must not alias a or b
        mpfr_mul(tmp_[0].re, a.re, b.re, MPFR_RNDN);
        mpfr_mul(tmp_[0].im, a.im, b.im, MPFR_RNDN);
        mpfr_sub(r.re, tmp_[0].re, tmp_[0].im, MPFR_RNDN);
        mpfr_mul(tmp_[1].re, a.re, b.im, MPFR_RNDN);
        mpfr_mul(tmp_[1].im, a.im, b.re, MPFR_RNDN);
        mpfr_add(r.im, tmp_[1].re, tmp_[1].im, MPFR_RNDN);
    }
    void cdiv(MpfrC& r, const MpfrC& a, const MpfrC& b) {
        // r = a/b; r must not alias
        mpfr_mul(tmp_[2].re, b.re, b.re, MPFR_RNDN);
        mpfr_mul(tmp_[2].im, b.im, b.im, MPFR_RNDN);
        mpfr_add(tmp_[2].re, tmp_[2].re, tmp_[2].im, MPFR_RNDN);  // |b|^2
        mpfr_set(tmp_[3].re, b.re, MPFR_RNDN);  // conj(b)
        mpfr_neg(tmp_[3].im, b.im, MPFR_RNDN);
        cmul(tmp_[4], a, tmp_[3]);
        mpfr_div(r.re, tmp_[4].re, tmp_[2].re, MPFR_RNDN);
        mpfr_div(r.im, tmp_[4].im, tmp_[2].re, MPFR_RNDN);
    }

    void seed_start_points() {
        long be = cauchy_root_bound_exp(f_);
        Mpfr r(prec_), theta(prec_), pi(prec_);
        mpfr_const_pi(pi.get(), MPFR_RNDN);
        for (int k = 0; k < d_; ++k) {
            // staggered radii and an irrational-ish angle offset to break
            // symmetry (pure real/conjugate-symmetric starts can stall)
            mpfr_set_d(r.get(), 0.5 + 0.45 * (k + 1) / d_, MPFR_RNDN);
            mpfr_mul_2si(r.get(), r.get(), be, MPFR_RNDN);
            mpfr_set_d(theta.get(), (2.0 * k + 0.5) / d_ + 0.1234567, MPFR_RNDN);
            mpfr_mul(theta.get(), theta.get(), pi.get(), MPFR_RNDN);
            mpfr_cos(z_[static_cast<size_t>(k)].re, theta.get(), MPFR_RNDN);
            mpfr_sin(z_[static_cast<size_t>(k)].im, theta.get(), MPFR_RNDN);
            mpfr_mul(z_[static_cast<size_t>(k)].re, z_[static_cast<size_t>(k)].re, r.get(), MPFR_RNDN);
            mpfr_mul(z_[static_cast<size_t>(k)].im, z_[static_cast<size_t>(k)].im, r.get(), MPFR_RNDN);
        }
    }

    // returns true when converged
    bool iterate_once() {
        bool all_small = true;
        MpfrC p, dp, w, sum, diff, inv, denom, corr;
        for (MpfrC* c : {&p, &dp, &w, &sum, &diff, &inv, &denom, &corr}) init(*c);
        for (int k = 0; k < d_; ++k) {
            MpfrC& z = z_[static_cast<size_t>(k)];
            // Horner for p and p'
            mpfr_set_ui(p.re, 0, MPFR_RNDN);
            mpfr_set_ui(p.im, 0, MPFR_RNDN);
            mpfr_set_ui(dp.re, 0, MPFR_RNDN);
            mpfr_set_ui(dp.im, 0, MPFR_RNDN);
            for (int i = d_; i >= 0; --i) {
                cmul(tmp_[5], dp, z);
                mpfr_add(dp.re, tmp_[5].re, p.re, MPFR_RNDN);
                mpfr_add(dp.im, tmp_[5].im, p.im, MPFR_RNDN);
                cmul(tmp_[5], p, z);
                mpfr_add(p.re, tmp_[5].re, coeff_[static_cast<size_t>(i)].re, MPFR_RNDN);
                mpfr_set(p.im, tmp_[5].im, MPFR_RNDN);
            }
            if (mpfr_zero_p(dp.re) && mpfr_zero_p(dp.im)) {
                // jitter and move on
                mpfr_add_d(z.re, z.re, 0.0009765625, MPFR_RNDN);
                all_small = false;
                continue;
            }
            cdiv(w, p, dp);
            // sum of 1/(z_k - z_j)
            mpfr_set_ui(sum.re, 0, MPFR_RNDN);
            mpfr_set_ui(sum.im, 0, MPFR_RNDN);
            for (int j = 0; j < d_; ++j) {
                if (j == k) continue;
                mpfr_sub(diff.re, z.re, z_[static_cast<size_t>(j)].re, MPFR_RNDN);
                mpfr_sub(diff.im, z.im, z_[static_cast<size_t>(j)].im, MPFR_RNDN);
                if (mpfr_zero_p(diff.re) && mpfr_zero_p(diff.im)) {
                    mpfr_add_d(z.re, z.re, 0.001953125, MPFR_RNDN);
                    mpfr_sub(diff.re, z.re, z_[static_cast<size_t>(j)].re, MPFR_RNDN);
                }
                mpfr_set_ui(tmp_[6].re, 1, MPFR_RNDN);
                mpfr_set_ui(tmp_[6].im, 0, MPFR_RNDN);
                cdiv(inv, tmp_[6], diff);
                mpfr_add(sum.re, sum.re, inv.re, MPFR_RNDN);
                mpfr_add(sum.im, sum.im, inv.im, MPFR_RNDN);
            }
            cmul(tmp_[6], w, sum);
            mpfr_ui_sub(denom.re, 1, tmp_[6].re, MPFR_RNDN);
            mpfr_neg(denom.im, tmp_[6].im, MPFR_RNDN);
            if (mpfr_zero_p(denom.re) && mpfr_zero_p(denom.im)) {
                cset(corr, w);
            } else {
                cdiv(corr, w, denom);
            }
            mpfr_sub(z.re, z.re, corr.re, MPFR_RNDN);
            mpfr_sub(z.im, z.im, corr.im, MPFR_RNDN);
            // convergence: |corr| <= 2^(-prec/2) * (1 + |z|)
            mpfr_hypot(tmp_[7].re, corr.re, corr.im, MPFR_RNDN);
            mpfr_hypot(tmp_[7].im, z.re, z.im, MPFR_RNDN);
            mpfr_add_ui(tmp_[7].im, tmp_[7].im, 1, MPFR_RNDN);
            mpfr_mul_2si(tmp_[7].im, tmp_[7].im, -static_cast<long>(prec_) / 2, MPFR_RNDN);
            if (mpfr_cmp(tmp_[7].re, tmp_[7].im) > 0) all_small = false;
        }
        for (MpfrC* c : {&p, &dp, &w, &sum, &diff, &inv, &denom, &corr}) clear(*c);
        return all_small;
    }

    const IntPoly& f_;
    mpfr_prec_t prec_;
    int d_;
    std::vector<MpfrC> coeff_;
    std::vector<MpfrC> z_;
    MpfrC tmp_[8];
};

}  // namespace rootdetail

// Exactly deg(f) pairwise-disjoint certified boxes of width <= target_width,
// sorted by (Re, Im) of the box midpoints.  Conjugate symmetry is exact by
// construction.  Throws std::invalid_argument for non-squarefree input.
inline std::vector<ComplexBox> complex_roots(const IntPoly& f, const Dyadic& target_width) {
    if (f.degree() < 1) throw std::invalid_argument("complex_roots: degree must be >= 1");
    if (!is_squarefree_poly(f)) throw std::invalid_argument("complex_roots: input not squarefree");
    const int d = f.degree();

    auto reals = rootdetail::isolate_real_roots(f, mul_2exp(target_width, -1));
    const int r1 = static_cast<int>(reals.size());
    const int r2 = (d - r1) / 2;
    if (r1 + 2 * r2 != d) throw consistency_error("complex_roots: parity mismatch");

    std::vector<ComplexBox> boxes;
    // tighten real brackets until pairwise strictly disjoint
    for (bool again = true; again;) {
        again = false;
        for (size_t i = 0; i + 1 < reals.size(); ++i) {
            if (!(reals[i].hi < reals[i + 1].lo)) {
                auto& a = reals[i];
                auto& b = reals[i + 1];
                auto shrink = [&](rootdetail::RealRootIso& r) {
                    if (r.exact) return;
                    int slo = rootdetail::dyadic_sign_eval(f, r.lo);
                    Dyadic m = mul_2exp(r.lo + r.hi, -1);
                    int sm = rootdetail::dyadic_sign_eval(f, m);
                    if (sm == 0) { r.lo = r.hi = m; r.exact = true; }
                    else if (sm == slo) r.lo = m;
                    else r.hi = m;
                };
                shrink(a);
                shrink(b);
                again = true;
            }
        }
    }
    for (const auto& r : reals)
        boxes.emplace_back(RealEnclosure(r.lo, r.hi), RealEnclosure::point(Dyadic(0)));

    if (r2 > 0) {
        unsigned long maxcoeff = 0;
        for (const auto& c : f.coeffs())
            maxcoeff = std::max(maxcoeff, mpz_sizeinbase(c.get_mpz_t(), 2));
        mpfr_prec_t prec = static_cast<mpfr_prec_t>(std::max<unsigned long>(128, maxcoeff + 64));
        const mpz_class d2(static_cast<long>(d) * d);
        bool done = false;
        for (; prec <= (1 << 16) && !done; prec *= 2) {
            rootdetail::AberthWorkspace ws(f, prec);
            ws.run(60 + 8 * d);
            auto zs = ws.approximations();
            std::vector<DyComplex> upper;
            for (auto& z : zs)
                if (z.im.sign() > 0) upper.push_back(z);
            if (static_cast<int>(upper.size()) != r2) continue;

            // exact certificates
            std::vector<Dyadic> rad;
            bool ok = true;
            for (const auto& z : upper) {
                DyComplex fv = f.eval_dycomplex(z);
                DyComplex dv = f.derivative().eval_dycomplex(z);
                mpq_class d_abs2 = dv.abs2_mpq();
                if (d_abs2 == 0) { ok = false; break; }
                // rho^2 = d^2 |f(z)|^2 / |f'(z)|^2
                mpq_class rho2 = mpq_class(d2) * fv.abs2_mpq() / d_abs2;
                Dyadic s = sqrt_mpq_dir(rho2, 96, MPFR_RNDU);
                // box must meet the width target and stay above the axis
                if (!(mul_2exp(s, 1) <= target_width) || !(s < z.im)) { ok = false; break; }
                rad.push_back(s);
            }
            if (!ok) continue;
            // pairwise disjoint in L-infinity (implies disjoint disks)
            for (size_t i = 0; i < upper.size() && ok; ++i)
                for (size_t j = i + 1; j < upper.size() && ok; ++j) {
                    Dyadic dre = abs(upper[i].re - upper[j].re);
                    Dyadic dim = abs(upper[i].im - upper[j].im);
                    Dyadic rr = rad[i] + rad[j];
                    if (!(dre > rr || dim > rr)) ok = false;
                }
            if (!ok) continue;

            for (size_t i = 0; i < upper.size(); ++i) {
                RealEnclosure re(upper[i].re - rad[i], upper[i].re + rad[i]);
                RealEnclosure imp(upper[i].im - rad[i], upper[i].im + rad[i]);
                boxes.emplace_back(re, imp);
                boxes.emplace_back(re, -imp);
            }
            done = true;
        }
        if (!done) throw precision_error("complex_roots: certification failed below 2^16 bits");
    }

    std::sort(boxes.begin(), boxes.end(), [](const ComplexBox& a, const ComplexBox& b) {
        Dyadic ra = a.re.mid(), rb = b.re.mid();
        if (ra != rb) return ra < rb;
        return a.im.mid() < b.im.mid();
    });
    if (static_cast<int>(boxes.size()) != d) throw consistency_error("complex_roots: box count");
    return boxes;
}

// Default working width for cached embeddings and height computations.
inline Dyadic default_root_width() { return Dyadic(mpz_class(1), -80); }

}  // namespace smallgen
