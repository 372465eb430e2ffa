#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "smallgen/factorq.hpp"
#include "smallgen/heights.hpp"
#include "smallgen/maxorder.hpp"
#include "smallgen/modpoly.hpp"
#include "smallgen/roots.hpp"

namespace smallgen {

// ---------------------------------------------------------------- mpq polys
// Minimal dense polynomial arithmetic over Q for internal use (element
// reduction, Euclidean gcd in K[x] and Q[x]).

using QPoly = std::vector<mpq_class>;  // constant first

namespace qp {

inline void trim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const QPoly& a) { return static_cast<int>(a.size()) - 1; }

inline QPoly from_int(const IntPoly& f) {
    QPoly r(f.coeffs().size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = f.coeffs()[i];
    return r;
}

inline QPoly mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

inline QPoly sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
    }
    trim(r);
    return r;
}

inline void divrem(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
    if (b.empty()) throw std::invalid_argument("qp::divrem: zero divisor");
    r = a;
    trim(r);
    q.clear();
    int db = degree(b);
    if (degree(r) < db) return;
    q.assign(static_cast<size_t>(degree(r) - db) + 1, 0);
    while (!r.empty() && degree(r) >= db) {
        mpq_class c = r.back() / b.back();
        int k = degree(r) - db;
        q[static_cast<size_t>(k)] = c;
        for (int i = 0; i <= db; ++i) r[static_cast<size_t>(k + i)] -= c * b[static_cast<size_t>(i)];
        trim(r);
    }
}

}  // namespace qp

// --------------------------------------------------------------- NumberField

struct DiscriminantResult {
    mpz_class value;                       // signed
    bool exact = false;                    // value == Delta_K
    std::vector<mpz_class> uncertain_at;   // primes where p-maximality is open
};

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

class NumberField : public std::enable_shared_from_this<NumberField> {
  public:
    // g must be monic, irreducible and primitive.
    static FieldPtr create(const IntPoly& g, bool assume_irreducible = false) {
        if (!g.is_monic()) throw std::invalid_argument("NumberField: defining polynomial not monic");
        if (g.degree() < 1) throw std::invalid_argument("NumberField: degree must be >= 1");
        if (!assume_irreducible && !is_irreducible_q(g))
            throw std::invalid_argument("NumberField: defining polynomial reducible");
        auto K = std::shared_ptr<NumberField>(new NumberField(g));
        return K;
    }

    // Accepts any irreducible polynomial; a non-monic f is replaced by the
    // monic model with roots lead*rho (an isomorphic field).
    static FieldPtr from_poly(const IntPoly& f, bool assume_irreducible = false) {
        IntPoly p = f.primitive_part();
        if (p.is_monic()) return create(p, assume_irreducible);
        IntPoly m = scale_roots(p, p.lead());
        m = m.primitive_part();
        if (!m.is_monic()) throw consistency_error("from_poly: monicization failed");
        return create(m, assume_irreducible);
    }

    const IntPoly& defining_poly() const { return g_; }
    int degree() const { return d_; }
    int r1() const { return r1_; }
    int r2() const { return r2_; }

    const mpz_class& defining_disc() const {
        std::lock_guard<std::mutex> lock(mu_);
        if (!disc_g_) disc_g_ = poly_discriminant(g_);
        return *disc_g_;
    }

    // Root enclosures of g sorted by (Re, Im) of midpoints; computed lazily,
    // refined monotonically on demand.
    std::vector<ComplexBox> embeddings(long width_exp = 80) const {
        std::lock_guard<std::mutex> lock(mu_);
        if (embeddings_.empty()) {
            embeddings_ = complex_roots(g_, Dyadic(mpz_class(1), -std::max(width_exp, 80L)));
            emb_width_exp_ = std::max(width_exp, 80L);
        } else if (width_exp > emb_width_exp_) {
            auto fresh = complex_roots(g_, Dyadic(mpz_class(1), -width_exp));
            for (size_t i = 0; i < fresh.size(); ++i) {
                auto isect = fresh[i].intersect(embeddings_[i]);
                embeddings_[i] = isect ? *isect : fresh[i];
            }
            emb_width_exp_ = width_exp;
        }
        return embeddings_;
    }

    LogHeight cached_height(const std::string& key,
                            const std::function<LogHeight()>& compute) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = height_cache_.find(key);
        if (it != height_cache_.end()) return it->second;
        LogHeight h = compute();
        height_cache_.emplace(key, h);
        return h;
    }

  private:
    explicit NumberField(const IntPoly& g) : g_(g), d_(g.degree()) {
        r1_ = count_real_roots(g_);
        r2_ = (d_ - r1_) / 2;
        if (r1_ + 2 * r2_ != d_) throw consistency_error("NumberField: signature parity");
    }

    IntPoly g_;
    int d_;
    int r1_ = 0, r2_ = 0;
    mutable std::optional<mpz_class> disc_g_;
    mutable std::vector<ComplexBox> embeddings_;
    mutable long emb_width_exp_ = 0;
    mutable std::unordered_map<std::string, LogHeight> height_cache_;
    mutable std::mutex mu_;
};

// -------------------------------------------------------------- FieldElement

// Element of K = Q[x]/(g) as rational coordinates over the power basis.
struct FieldElement {
    FieldPtr K;
    std::vector<mpq_class> coords;  // size = degree, reduced

    bool is_zero() const {
        for (const auto& c : coords)
            if (c != 0) return false;
        return true;
    }

    std::string key() const {
        std::string s;
        for (const auto& c : coords) {
            s += c.get_str();
            s += ';';
        }
        return s;
    }
};

inline FieldElement element_from_mpq(const FieldPtr& K, const mpq_class& r) {
    FieldElement e{K, std::vector<mpq_class>(static_cast<size_t>(K->degree()), 0)};
    e.coords[0] = r;
    return e;
}

inline FieldElement element_theta(const FieldPtr& K) {
    FieldElement e{K, std::vector<mpq_class>(static_cast<size_t>(K->degree()), 0)};
    if (K->degree() == 1) {
        // theta = the rational root of g
        e.coords[0] = mpq_class(-K->defining_poly().coeff(0), K->defining_poly().coeff(1));
        e.coords[0].canonicalize();
    } else {
        e.coords[1] = 1;
    }
    return e;
}

namespace elemdetail {

inline void check_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.K != b.K) throw std::invalid_argument("field elements from different fields");
}

// reduce a coordinate polynomial (possibly of degree >= d) mod g
inline std::vector<mpq_class> reduce_mod_g(QPoly v, const IntPoly& g) {
    int d = g.degree();
    while (qp::degree(v) >= d) {
        int k = qp::degree(v) - d;
        mpq_class c = v.back();
        for (int i = 0; i <= d; ++i) v[static_cast<size_t>(k + i)] -= c * mpq_class(g.coeff(i));
        qp::trim(v);
    }
    v.resize(static_cast<size_t>(d), 0);
    return v;
}

}  // namespace elemdetail

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    elemdetail::check_same_field(a, b);
    FieldElement r = a;
    for (size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords[i];
    return r;
}

inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    elemdetail::check_same_field(a, b);
    FieldElement r = a;
    for (size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= b.coords[i];
    return r;
}

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    elemdetail::check_same_field(a, b);
    QPoly prod = qp::mul(QPoly(a.coords.begin(), a.coords.end()),
                         QPoly(b.coords.begin(), b.coords.end()));
    FieldElement r{a.K, elemdetail::reduce_mod_g(std::move(prod), a.K->defining_poly())};
    return r;
}

inline FieldElement operator*(const FieldElement& a, const mpq_class& s) {
    FieldElement r = a;
    for (auto& c : r.coords) c *= s;
    return r;
}

// inverse via extended Euclid against g in Q[x]
inline FieldElement inverse(const FieldElement& a) {
    if (a.is_zero()) throw std::invalid_argument("division by zero field element");
    QPoly r0 = qp::from_int(a.K->defining_poly());
    QPoly r1(a.coords.begin(), a.coords.end());
    qp::trim(r1);
    QPoly s0{}, s1{mpq_class(1)};  // coefficients of the element in the Bezout identity
    while (qp::degree(r1) > 0) {
        QPoly q, r;
        qp::divrem(r0, r1, q, r);
        QPoly s2 = qp::sub(s0, qp::mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r1.empty()) throw consistency_error("inverse: element and g share a factor");
    mpq_class inv = 1 / r1[0];
    QPoly res;
    for (auto& c : s1) res.push_back(c * inv);
    FieldElement out{a.K, elemdetail::reduce_mod_g(std::move(res), a.K->defining_poly())};
    return out;
}

inline FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    return a * inverse(b);
}

inline FieldElement pow(const FieldElement& a, unsigned long e) {
    FieldElement r = element_from_mpq(a.K, 1);
    FieldElement b = a;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

// Minimal polynomial of alpha: primitive irreducible integer polynomial with
// positive leading coefficient, found as the first linear dependency among
// the powers 1, alpha, alpha^2, ... (exact rational linear algebra).  Its
// degree divides [K:Q]; alpha generates K iff the degree equals it.
inline IntPoly minimal_polynomial(const FieldElement& alpha) {
    const int d = alpha.K->degree();
    struct Row {
        std::vector<mpq_class> vec;   // reduced coordinate vector, pivot scaled to 1
        int pivot;
        std::vector<mpq_class> expr;  // combination over powers of alpha
    };
    std::vector<Row> rows;
    FieldElement power = element_from_mpq(alpha.K, 1);
    for (int k = 0; k <= d; ++k) {
        std::vector<mpq_class> v = power.coords;
        std::vector<mpq_class> e(static_cast<size_t>(k) + 1, 0);
        e[static_cast<size_t>(k)] = 1;
        for (const Row& r : rows) {
            mpq_class c = v[static_cast<size_t>(r.pivot)];
            if (c == 0) continue;
            for (size_t i = 0; i < v.size(); ++i) v[i] -= c * r.vec[i];
            if (r.expr.size() > e.size()) e.resize(r.expr.size(), 0);
            for (size_t i = 0; i < r.expr.size(); ++i) e[i] -= c * r.expr[i];
        }
        int pivot = -1;
        for (int i = 0; i < d; ++i)
            if (v[static_cast<size_t>(i)] != 0) { pivot = i; break; }
        if (pivot < 0) {
            // dependency: sum e_i alpha^i = 0
            mpz_class den = 1;
            for (const auto& c : e) {
                mpz_class l;
                mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
                den = l;
            }
            std::vector<mpz_class> ic(e.size());
            for (size_t i = 0; i < e.size(); ++i) {
                mpq_class v = e[i] * den;
                ic[i] = v.get_num();
            }
            return IntPoly(std::move(ic)).primitive_part();
        }
        mpq_class inv = 1 / v[static_cast<size_t>(pivot)];
        for (auto& x : v) x *= inv;
        for (auto& x : e) x *= inv;
        rows.push_back({std::move(v), pivot, std::move(e)});
        power = power * alpha;
    }
    throw consistency_error("minimal_polynomial: no dependency up to degree d");
}

inline bool is_generator(const FieldElement& alpha) {
    return minimal_polynomial(alpha).degree() == alpha.K->degree();
}

// Height of a field element, cached per field by coordinate vector.
inline LogHeight height_element(const FieldElement& alpha) {
    return alpha.K->cached_height(alpha.key(), [&] {
        return LogHeight::of_algebraic(minimal_polynomial(alpha), /*assume_irreducible=*/true);
    });
}

// ------------------------------------------------------- resultant helpers

// h(x) = Res_y(A(y), B(x - s*y)) computed by evaluation/interpolation.
// Roots of h are { s * alpha + beta : A(alpha) = 0, B(beta) = 0 }... with the
// convention below: for B(x - s*y), the roots are s*rho_A + rho_B.
inline IntPoly resultant_linear_sub(const IntPoly& A, const IntPoly& B, const mpz_class& s) {
    int da = A.degree(), db = B.degree();
    if (da < 1 || db < 1) throw std::invalid_argument("resultant_linear_sub: degrees must be >= 1");
    int dh = da * db;
    // B(t - s*y) as a polynomial in y, then a univariate resultant per point
    std::vector<mpq_class> xs, ys;
    for (int idx = 0; idx <= dh; ++idx) {
        long t = (idx % 2 == 0) ? idx / 2 : -(idx / 2 + 1);
        // compute B(t - s*y) via Horner in (t - s*y)
        IntPoly lin({mpz_class(t), -s});  // t - s*y
        IntPoly acc;
        for (int i = db; i >= 0; --i) {
            acc = acc * lin;
            acc = acc + IntPoly::constant(B.coeff(i));
        }
        if (acc.degree() != db) throw consistency_error("resultant_linear_sub: degree drop");
        mpz_class r = resultant(A, acc);
        xs.emplace_back(t);
        ys.emplace_back(r);
    }
    // Lagrange interpolation (exact over Q), then integrality check
    std::vector<mpq_class> coef(static_cast<size_t>(dh) + 1, 0);
    for (size_t i = 0; i < xs.size(); ++i) {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        std::vector<mpq_class> num{1};
        mpq_class den = 1;
        for (size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            std::vector<mpq_class> next(num.size() + 1, 0);
            for (size_t k = 0; k < num.size(); ++k) {
                next[k + 1] += num[k];
                next[k] -= xs[j] * num[k];
            }
            num = std::move(next);
            den *= xs[i] - xs[j];
        }
        mpq_class w = ys[i] / den;
        for (size_t k = 0; k < num.size(); ++k) coef[k] += w * num[k];
    }
    std::vector<mpz_class> ic(coef.size());
    for (size_t i = 0; i < coef.size(); ++i) {
        if (coef[i].get_den() != 1) throw consistency_error("resultant_linear_sub: non-integer");
        ic[i] = coef[i].get_num();
    }
    return IntPoly(std::move(ic));
}

// --------------------------------------------------------------- Trager test

struct TragerInfo {
    int shift = 0;  // the s that made the resultant squarefree
};

// True iff the irreducible polynomial f has a root in K.
// Trager-style: with h(x) = Res_y(g(y), f(x - s*y)) squarefree, the factors
// of f over K are gcd_K(f(x), h_i(x + s*theta)) over the irreducible factors
// h_i of h; a root in K exists iff some gcd has degree 1.
inline bool has_root_in_field(const IntPoly& f0, const FieldPtr& K, TragerInfo* info = nullptr,
                              bool assume_irreducible = false) {
    IntPoly f = f0.primitive_part();
    if (f.degree() < 1) throw std::invalid_argument("has_root_in_field: degree must be >= 1");
    if (!assume_irreducible && !is_irreducible_q(f))
        throw std::invalid_argument("has_root_in_field: f reducible");
    if (f.degree() == 1) return true;  // rational root lies in every field
    if (K->degree() % f.degree() != 0) return false;

    const IntPoly& g = K->defining_poly();
    int s = 1;
    IntPoly h;
    for (;; ++s) {
        if (s > 200) throw consistency_error("has_root_in_field: no squarefree shift found");
        // roots of h: s*theta_i + alpha_j
        h = resultant_linear_sub(g, f, mpz_class(s));
        if (is_squarefree_poly(h)) break;
    }
    if (info) info->shift = s;

    auto hf = factor_over_q(h);
    // gcd over K of f(x) and h_i(x + s*theta)
    FieldElement theta = element_theta(K);
    FieldElement stheta = theta * mpq_class(s);

    using KPoly = std::vector<FieldElement>;  // constant first
    auto kp_trim = [](KPoly& p) {
        while (!p.empty() && p.back().is_zero()) p.pop_back();
    };
    auto kp_degree = [](const KPoly& p) { return static_cast<int>(p.size()) - 1; };

    for (const auto& [hi, mult] : hf.factors) {
        (void)mult;
        if (hi.degree() < 1) continue;
        // build hi(x + s*theta) via Horner: acc = acc*(x + stheta) + c
        KPoly acc;
        for (int i = hi.degree(); i >= 0; --i) {
            KPoly next(acc.size() + 1, element_from_mpq(K, 0));
            for (size_t j = 0; j < acc.size(); ++j) {
                next[j + 1] = next[j + 1] + acc[j];
                next[j] = next[j] + acc[j] * stheta;
            }
            next[0] = next[0] + element_from_mpq(K, mpq_class(hi.coeff(i)));
            acc = std::move(next);
            kp_trim(acc);
        }
        // f as a K-polynomial
        KPoly fk;
        for (int i = 0; i <= f.degree(); ++i) fk.push_back(element_from_mpq(K, mpq_class(f.coeff(i))));
        // Euclid
        KPoly a = fk, b = acc;
        kp_trim(a);
        kp_trim(b);
        if (kp_degree(a) < kp_degree(b)) std::swap(a, b);
        while (!b.empty()) {
            // remainder of a by b (monic-normalize b first)
            FieldElement lead_inv = inverse(b.back());
            KPoly bm(b.size(), element_from_mpq(K, 0));
            for (size_t i = 0; i < b.size(); ++i) bm[i] = b[i] * lead_inv;
            KPoly r = a;
            kp_trim(r);
            while (!r.empty() && kp_degree(r) >= kp_degree(bm)) {
                FieldElement c = r.back();
                int k = kp_degree(r) - kp_degree(bm);
                for (int i = 0; i <= kp_degree(bm); ++i)
                    r[static_cast<size_t>(k + i)] = r[static_cast<size_t>(k + i)] - bm[static_cast<size_t>(i)] * c;
                kp_trim(r);
            }
            a = std::move(bm);
            b = std::move(r);
        }
        if (kp_degree(a) == 1) return true;
    }
    return false;
}

inline bool fields_isomorphic(const IntPoly& f, const IntPoly& g) {
    IntPoly fp = f.primitive_part(), gp = g.primitive_part();
    if (!is_irreducible_q(fp) || !is_irreducible_q(gp))
        throw std::invalid_argument("fields_isomorphic: inputs must be irreducible");
    if (fp.degree() != gp.degree()) return false;
    FieldPtr K = NumberField::from_poly(gp, true);
    return has_root_in_field(fp, K, nullptr, true);
}

// ------------------------------------------- minimal polynomial of a*al+b*be

// Minimal polynomial of a*alpha + b*beta where alpha, beta are the
// designated (first by (Re, Im) midpoint) roots of f_alpha, f_beta.
inline IntPoly minpoly_of_combination(const IntPoly& fa0, const IntPoly& fb0, const mpz_class& a,
                                      const mpz_class& b, bool assume_irreducible = false) {
    IntPoly fa = fa0.primitive_part(), fb = fb0.primitive_part();
    if (a == 0 && b == 0) throw std::invalid_argument("minpoly_of_combination: (a, b) = (0, 0)");
    if (!assume_irreducible && (!is_irreducible_q(fa) || !is_irreducible_q(fb)))
        throw std::invalid_argument("minpoly_of_combination: inputs must be irreducible");
    if (b == 0) return scale_roots(fa, a).primitive_part();
    if (a == 0) return scale_roots(fb, b).primitive_part();

    IntPoly fbb = scale_roots(fb, b).primitive_part();  // roots b*beta_j
    // roots of h: a*alpha_i + (b*beta_j)
    IntPoly h = resultant_linear_sub(fa, fbb, a);
    auto hf = factor_over_q(h);
    if (hf.factors.size() == 1 && hf.factors[0].second == 1) return hf.factors[0].first;

    // select the unique factor vanishing at a*alpha_1 + b*beta_1
    for (long w = 80; w <= (1 << 16); w *= 2) {
        ComplexBox ra = complex_roots(fa, Dyadic(mpz_class(1), -w)).front();
        ComplexBox rb = complex_roots(fb, Dyadic(mpz_class(1), -w)).front();
        ComplexBox v = ra * Dyadic(a) + rb * Dyadic(b);
        const IntPoly* match = nullptr;
        int nmatch = 0;
        for (const auto& [hi, mult] : hf.factors) {
            (void)mult;
            if (hi.eval_box(v, static_cast<unsigned long>(w) + 64).contains_zero()) {
                ++nmatch;
                match = &hi;
            }
        }
        if (nmatch == 1) return *match;
    }
    throw undecided_error("minpoly_of_combination: cannot isolate the designated factor");
}

// ------------------------------------------------------- Dedekind criterion

// True iff Z[theta] is p-maximal (Dedekind's criterion).
inline bool dedekind_p_maximal(const FieldPtr& K, const mpz_class& p) {
    if (!is_prime_mpz(p).prime) throw std::invalid_argument("dedekind_p_maximal: p not prime");
    if (mpz_sizeinbase(p.get_mpz_t(), 2) > 62)
        throw precision_error("dedekind_p_maximal: p exceeds the word-size factorization range");
    u64 pu = mpz_get_ui(p.get_mpz_t());
    const IntPoly& g = K->defining_poly();
    auto fac = factor_mod_p(g, pu);
    ModPoly rad = mp_one(), cof = mp_one();
    for (const auto& f : fac.factors) {
        rad = mp_mul(rad, f.poly, pu);
        for (int i = 1; i < f.mult; ++i) cof = mp_mul(cof, f.poly, pu);
    }
    IntPoly g1 = mp_lift(rad), g2 = mp_lift(cof);
    IntPoly t = g - g1 * g2;
    std::vector<mpz_class> tc(t.coeffs());
    for (auto& c : tc) {
        if (!mpz_divisible_p(c.get_mpz_t(), p.get_mpz_t()))
            throw consistency_error("dedekind: lift mismatch");
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t());
    }
    ModPoly tbar = mp_reduce(IntPoly(std::move(tc)), pu);
    ModPoly d = mp_gcd(mp_gcd(tbar, rad, pu), cof, pu);
    return d.degree() == 0;
}

// Field discriminant with certified status.  disc(g) = index^2 * Delta_K;
// each prime with p^2 | disc(g) is tested with Dedekind's criterion:
// maximal keeps the valuation, a non-maximal prime with v_p in {2, 3} forces
// index valuation exactly 1, anything else stays uncertain.
inline DiscriminantResult field_discriminant(const FieldPtr& K) {
    DiscriminantResult out;
    mpz_class D = K->defining_disc();
    out.value = D;
    auto fac = factor_mpz(D);
    for (auto& [p, e] : fac) {
        if (e < 2) continue;
        bool maximal = false;
        bool known = true;
        try {
            maximal = dedekind_p_maximal(K, p);
        } catch (const precision_error&) {
            known = false;
        }
        if (known && maximal) continue;
        if (known && (e == 2 || e == 3)) {
            out.value /= p * p;
            continue;
        }
        out.uncertain_at.push_back(p);
    }
    out.exact = out.uncertain_at.empty();
    return out;
}

// Merge exact discriminant information across isomorphic monic models:
// a prime's valuation is pinned by any model whose power basis is p-maximal.
inline DiscriminantResult field_discriminant_multi(const std::vector<FieldPtr>& models) {
    if (models.empty()) throw std::invalid_argument("field_discriminant_multi: no models");
    DiscriminantResult base = field_discriminant(models[0]);
    if (base.exact || models.size() == 1) return base;

    mpz_class D = models[0]->defining_disc();
    DiscriminantResult out;
    out.value = D;
    auto fac = factor_mpz(D);
    for (auto& [p, e] : fac) {
        if (e < 2) continue;
        std::optional<unsigned long> pinned;  // v_p(Delta)
        for (const auto& M : models) {
            try {
                if (dedekind_p_maximal(M, p)) {
                    mpz_class DM = M->defining_disc();
                    unsigned long v = 0;
                    while (mpz_divisible_p(DM.get_mpz_t(), p.get_mpz_t())) {
                        DM /= p;
                        ++v;
                    }
                    pinned = v;
                    break;
                }
            } catch (const precision_error&) {
            }
        }
        if (pinned) {
            // replace p^e by p^pinned in the value
            for (unsigned long i = 0; i < e; ++i) out.value /= p;
            for (unsigned long i = 0; i < *pinned; ++i) out.value *= p;
            continue;
        }
        if (e == 2 || e == 3) {
            bool maximal_known_false = false;
            try {
                maximal_known_false = !dedekind_p_maximal(models[0], p);
            } catch (const precision_error&) {
            }
            if (maximal_known_false) {
                out.value /= p * p;
                continue;
            }
        }
        out.uncertain_at.push_back(p);
    }
    out.exact = out.uncertain_at.empty();
    return out;
}

// ---------------------------------------------------------- splitting test

namespace bigmod {

// x^p mod (g, p) for arbitrary-precision p (used only above the word range)
inline bool x_pow_p_is_x(const IntPoly& g, const mpz_class& p) {
    int d = g.degree();
    auto norm = [&](mpz_class& x) {
        x %= p;
        if (x < 0) x += p;
    };
    auto mul = [&](const std::vector<mpz_class>& A, const std::vector<mpz_class>& B) {
        std::vector<mpz_class> r(A.size() + B.size() - 1, 0);
        for (size_t i = 0; i < A.size(); ++i) {
            if (A[i] == 0) continue;
            for (size_t j = 0; j < B.size(); ++j) {
                r[i + j] += A[i] * B[j];
                norm(r[i + j]);
            }
        }
        // reduce by monic g
        while (static_cast<int>(r.size()) - 1 >= d) {
            mpz_class c = r.back();
            norm(c);
            size_t k = r.size() - 1 - static_cast<size_t>(d);
            if (c != 0) {
                for (int i = 0; i < d; ++i) {
                    r[k + static_cast<size_t>(i)] -= c * g.coeff(i);
                    norm(r[k + static_cast<size_t>(i)]);
                }
            }
            r.pop_back();
            while (!r.empty()) {
                mpz_class t = r.back();
                norm(t);
                if (t != 0) break;
                r.pop_back();
            }
        }
        for (auto& x : r) norm(x);
        return r;
    };
    std::vector<mpz_class> result{1};
    std::vector<mpz_class> b{0, 1};
    mpz_class e = p;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = mul(result, b);
        e >>= 1;
        if (e > 0) b = mul(b, b);
    }
    return result.size() == 2 && result[0] == 0 && result[1] == 1;
}

}  // namespace bigmod

// p splits completely in K (power-basis test).  Conservative: returns false
// whenever p divides disc(g), where order-level information is insufficient.
inline bool splits_completely(const FieldPtr& K, const mpz_class& p) {
    if (!is_prime_mpz(p).prime) throw std::invalid_argument("splits_completely: p not prime");
    if (mpz_divisible_p(K->defining_disc().get_mpz_t(), p.get_mpz_t())) return false;
    const IntPoly& g = K->defining_poly();
    if (static_cast<int>(mpz_sizeinbase(p.get_mpz_t(), 2)) <= 62) {
        u64 pu = mpz_get_ui(p.get_mpz_t());
        ModPoly gp = mp_reduce(g, pu);
        ModPoly xp = mp_powmod(mp_x(), p, gp, pu);
        return xp == mp_mod(mp_x(), gp, pu);
    }
    return bigmod::x_pow_p_is_x(g, p);
}

}  // namespace smallgen
