#pragma once

#include <gmpxx.h>

#include <initializer_list>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "smallgen/dyadic.hpp"
#include "smallgen/errors.hpp"
#include "smallgen/zutil.hpp"

namespace smallgen {

// Dense univariate polynomial over Z, constant term first.
// Invariant: empty (the zero polynomial) or nonzero leading coefficient.
class IntPoly {
  public:
    IntPoly() = default;
    explicit IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }
    IntPoly(std::initializer_list<long> coeffs) {
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static IntPoly constant(const mpz_class& v) { return IntPoly(std::vector<mpz_class>{v}); }
    static IntPoly x_power(unsigned k) {
        std::vector<mpz_class> c(k + 1, 0);
        c[k] = 1;
        return IntPoly(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const mpz_class& lead() const {
        static const mpz_class zero = 0;
        return c_.empty() ? zero : c_.back();
    }
    mpz_class coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
        return c_[static_cast<size_t>(i)];
    }
    const std::vector<mpz_class>& coeffs() const { return c_; }

    bool operator==(const IntPoly& o) const { return c_ == o.c_; }
    bool operator!=(const IntPoly& o) const { return !(*this == o); }

    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    mpz_class content() const {
        mpz_class g = 0;
        for (const auto& a : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
        return g;  // >= 0; 0 only for the zero polynomial
    }

    // content 1 and positive leading coefficient
    bool is_primitive() const { return !c_.empty() && lead() > 0 && content() == 1; }

    IntPoly primitive_part() const {
        if (is_zero()) return {};
        mpz_class g = content();
        if (lead() < 0) g = -g;
        std::vector<mpz_class> r(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) mpz_divexact(r[i].get_mpz_t(), c_[i].get_mpz_t(), g.get_mpz_t());
        return IntPoly(std::move(r));
    }

    IntPoly derivative() const {
        if (degree() < 1) return {};
        std::vector<mpz_class> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
        return IntPoly(std::move(r));
    }

    template <typename T>
    T eval(const T& x) const {
        T acc{};
        for (size_t i = c_.size(); i-- > 0;) {
            acc = acc * x;
            acc += T(c_[i]);
        }
        return acc;
    }

    mpq_class eval_mpq(const mpq_class& x) const {
        mpq_class acc = 0;
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + mpq_class(c_[i]);
        return acc;
    }

    mpz_class eval_mpz(const mpz_class& x) const {
        mpz_class acc = 0;
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    // Exact evaluation at a dyadic complex point (ring operations only).
    DyComplex eval_dycomplex(const DyComplex& z) const {
        DyComplex acc;
        for (size_t i = c_.size(); i-- > 0;) {
            acc = acc * z;
            acc.re = acc.re + Dyadic(c_[i]);
        }
        return acc;
    }

    // Interval evaluation on a complex box, with outward rounding to `prec`.
    ComplexBox eval_box(const ComplexBox& z, unsigned long prec = 256) const {
        ComplexBox acc;
        for (size_t i = c_.size(); i-- > 0;) {
            acc = (acc * z).rounded(prec);
            acc.re = acc.re + RealEnclosure::point(Dyadic(c_[i]));
        }
        return acc;
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const mpz_class& a = coeff(i);
            if (a == 0) continue;
            mpz_class mag = abs(a);
            if (first) {
                if (a < 0) os << "-";
                first = false;
            } else {
                os << (a < 0 ? " - " : " + ");
            }
            if (mag != 1 || i == 0) os << mag.get_str();
            if (i > 0) {
                if (mag != 1) os << "*";
                os << var;
                if (i > 1) os << "^" << i;
            }
        }
        return os.str();
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<mpz_class> c_;
};

// total order used for deterministic tie-breaks: degree, then coefficients
// from the constant term up
inline int cmp(const IntPoly& a, const IntPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    for (int i = 0; i <= a.degree(); ++i) {
        int c = cmp(a.coeff(i), b.coeff(i));
        if (c != 0) return c;
    }
    return 0;
}

inline bool lex_less(const IntPoly& a, const IntPoly& b) { return cmp(a, b) < 0; }

inline IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> r(std::max(a.coeffs().size(), b.coeffs().size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return IntPoly(std::move(r));
}

inline IntPoly operator-(const IntPoly& a) {
    std::vector<mpz_class> r(a.coeffs().size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = -a.coeffs()[i];
    return IntPoly(std::move(r));
}

inline IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

inline IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> r(a.coeffs().size() + b.coeffs().size() - 1, 0);
    for (size_t i = 0; i < a.coeffs().size(); ++i) {
        if (a.coeffs()[i] == 0) continue;
        for (size_t j = 0; j < b.coeffs().size(); ++j) r[i + j] += a.coeffs()[i] * b.coeffs()[j];
    }
    return IntPoly(std::move(r));
}

inline IntPoly operator*(const IntPoly& a, const mpz_class& s) {
    if (s == 0) return {};
    std::vector<mpz_class> r(a.coeffs().size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeffs()[i] * s;
    return IntPoly(std::move(r));
}

// Quotient of a by b over Z when b divides a exactly; nullopt otherwise.
inline std::optional<IntPoly> try_divide(const IntPoly& a, const IntPoly& b) {
    if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
    if (a.is_zero()) return IntPoly{};
    if (a.degree() < b.degree()) return std::nullopt;
    std::vector<mpz_class> rem(a.coeffs());
    std::vector<mpz_class> q(static_cast<size_t>(a.degree() - b.degree()) + 1, 0);
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
        mpz_class& top = rem[static_cast<size_t>(k + b.degree())];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), b.lead().get_mpz_t())) return std::nullopt;
        mpz_class c;
        mpz_divexact(c.get_mpz_t(), top.get_mpz_t(), b.lead().get_mpz_t());
        q[static_cast<size_t>(k)] = c;
        for (int i = 0; i <= b.degree(); ++i) rem[static_cast<size_t>(k + i)] -= c * b.coeff(i);
    }
    for (const auto& r : rem)
        if (r != 0) return std::nullopt;
    return IntPoly(std::move(q));
}

inline IntPoly divexact(const IntPoly& a, const IntPoly& b) {
    auto q = try_divide(a, b);
    if (!q) throw consistency_error("divexact: not divisible");
    return *q;
}

// Scaled remainder: lead(b)^j * a reduced by b for some j >= 0, i.e. the
// true remainder up to a constant factor.  Sufficient for the primitive
// PRS, which strips contents at every step.
inline IntPoly pseudo_rem(const IntPoly& a, const IntPoly& b) {
    if (b.is_zero()) throw std::invalid_argument("pseudo_rem: zero divisor");
    IntPoly r = a;
    int db = b.degree();
    const mpz_class& lb = b.lead();
    while (!r.is_zero() && r.degree() >= db) {
        std::vector<mpz_class> nr(r.coeffs());
        mpz_class lr = r.lead();
        int dr = r.degree();
        for (auto& x : nr) x *= lb;
        for (int j = 0; j <= db; ++j) nr[static_cast<size_t>(dr - db + j)] -= lr * b.coeff(j);
        IntPoly next(std::move(nr));
        if (!next.is_zero() && next.degree() >= dr) throw consistency_error("pseudo_rem: no degree drop");
        r = std::move(next);
    }
    return r;
}

// gcd over Z via the primitive PRS; result primitive with positive lead,
// times the gcd of the contents.
inline IntPoly gcd_z(IntPoly a, IntPoly b) {
    if (a.is_zero()) return b.is_zero() ? b : b.primitive_part() * gcd(a.content(), b.content());
    if (b.is_zero()) return a.primitive_part() * gcd(a.content(), b.content());
    mpz_class cont;
    mpz_gcd(cont.get_mpz_t(), a.content().get_mpz_t(), b.content().get_mpz_t());
    a = a.primitive_part();
    b = b.primitive_part();
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        IntPoly r = pseudo_rem(a, b).primitive_part();
        a = std::move(b);
        b = std::move(r);
        if (!b.is_zero() && a.degree() < b.degree()) std::swap(a, b);
    }
    return a * cont;
}

// Resultant via fraction-free (Bareiss) elimination of the Sylvester
// matrix.  Exact; adequate for the degrees this library handles.
inline mpz_class resultant(const IntPoly& f, const IntPoly& g) {
    if (f.is_zero() || g.is_zero()) return 0;
    int m = f.degree(), n = g.degree();
    if (m == 0) return pow_mpz(f.lead(), static_cast<unsigned long>(n));
    if (n == 0) return pow_mpz(g.lead(), static_cast<unsigned long>(m));
    int N = m + n;
    std::vector<std::vector<mpz_class>> a(static_cast<size_t>(N),
                                          std::vector<mpz_class>(static_cast<size_t>(N), 0));
    // n rows of f's coefficients (descending), then m rows of g's
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(i + j)] = f.coeff(m - j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) a[static_cast<size_t>(n + i)][static_cast<size_t>(i + j)] = g.coeff(n - j);

    int sign = 1;
    mpz_class prev = 1;
    for (int k = 0; k < N - 1; ++k) {
        if (a[static_cast<size_t>(k)][static_cast<size_t>(k)] == 0) {
            int piv = -1;
            for (int i = k + 1; i < N; ++i)
                if (a[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0) { piv = i; break; }
            if (piv < 0) return 0;
            std::swap(a[static_cast<size_t>(k)], a[static_cast<size_t>(piv)]);
            sign = -sign;
        }
        for (int i = k + 1; i < N; ++i) {
            for (int j = k + 1; j < N; ++j) {
                mpz_class t = a[static_cast<size_t>(i)][static_cast<size_t>(j)] * a[static_cast<size_t>(k)][static_cast<size_t>(k)] -
                              a[static_cast<size_t>(i)][static_cast<size_t>(k)] * a[static_cast<size_t>(k)][static_cast<size_t>(j)];
                mpz_divexact(a[static_cast<size_t>(i)][static_cast<size_t>(j)].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[static_cast<size_t>(i)][static_cast<size_t>(k)] = 0;
        }
        prev = a[static_cast<size_t>(k)][static_cast<size_t>(k)];
    }
    return sign * a[static_cast<size_t>(N - 1)][static_cast<size_t>(N - 1)];
}

// disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lead(f)
inline mpz_class poly_discriminant(const IntPoly& f) {
    if (f.degree() < 1) throw std::invalid_argument("poly_discriminant: degree must be >= 1");
    mpz_class res = resultant(f, f.derivative());
    mpz_class d;
    mpz_divexact(d.get_mpz_t(), res.get_mpz_t(), f.lead().get_mpz_t());
    int par = (f.degree() * (f.degree() - 1) / 2) % 2;
    return par ? mpz_class(-d) : d;
}

inline bool is_squarefree_poly(const IntPoly& f) {
    if (f.degree() < 1) return !f.is_zero();
    return gcd_z(f, f.derivative()).degree() == 0;
}

// Squarefree decomposition (Yun): f = unit * prod parts[i].first ^ parts[i].second,
// with each part primitive, positive lead, pairwise coprime and squarefree.
struct SquarefreeDecomposition {
    mpz_class unit;  // signed content
    std::vector<std::pair<IntPoly, int>> parts;
};

inline SquarefreeDecomposition squarefree_decomposition(const IntPoly& f0) {
    if (f0.is_zero()) throw std::invalid_argument("squarefree_decomposition: zero");
    SquarefreeDecomposition out;
    mpz_class cont = f0.content();
    if (f0.lead() < 0) cont = -cont;
    out.unit = cont;
    IntPoly f = f0.primitive_part();
    if (f.degree() == 0) return out;

    IntPoly fp = f.derivative();
    IntPoly d = gcd_z(f, fp);
    if (d.degree() == 0) {
        out.parts.emplace_back(f, 1);
        return out;
    }
    IntPoly b = divexact(f, d);
    IntPoly c = divexact(fp, d);
    IntPoly z = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        IntPoly a = gcd_z(b, z);
        if (a.degree() > 0) out.parts.emplace_back(a, i);
        b = divexact(b, a);
        c = divexact(z, a);
        z = c - b.derivative();
        ++i;
    }
    return out;
}

inline IntPoly squarefree_part(const IntPoly& f) {
    IntPoly p = f.primitive_part();
    IntPoly g = gcd_z(p, p.derivative());
    return divexact(p, g).primitive_part();
}

// f(x + s), integer shift (Taylor shift, O(d^2))
inline IntPoly taylor_shift(const IntPoly& f, const mpz_class& s) {
    std::vector<mpz_class> a(f.coeffs());
    int d = f.degree();
    for (int i = 0; i < d; ++i)
        for (int j = d - 1; j >= i; --j) a[static_cast<size_t>(j)] += s * a[static_cast<size_t>(j + 1)];
    return IntPoly(std::move(a));
}

// polynomial whose roots are k * (roots of f): coefficients a_i * k^(d-i)
inline IntPoly scale_roots(const IntPoly& f, const mpz_class& k) {
    if (k == 0) throw std::invalid_argument("scale_roots: k = 0");
    int d = f.degree();
    std::vector<mpz_class> r(f.coeffs());
    mpz_class kk = 1;
    for (int i = d - 1; i >= 0; --i) {
        kk *= k;
        r[static_cast<size_t>(i)] *= kk;
    }
    return IntPoly(std::move(r));
}

// f(k*x): coefficients a_i * k^i
inline IntPoly compose_scale(const IntPoly& f, const mpz_class& k) {
    std::vector<mpz_class> r(f.coeffs());
    mpz_class kk = 1;
    for (size_t i = 1; i < r.size(); ++i) {
        kk *= k;
        r[i] *= kk;
    }
    return IntPoly(std::move(r));
}

inline IntPoly compose_neg(const IntPoly& f) {
    std::vector<mpz_class> r(f.coeffs());
    for (size_t i = 1; i < r.size(); i += 2) r[i] = -r[i];
    return IntPoly(std::move(r));
}

// x^deg * f(1/x); drops trailing zero coefficients of the input
inline IntPoly reverse_poly(const IntPoly& f) {
    std::vector<mpz_class> r(f.coeffs().rbegin(), f.coeffs().rend());
    return IntPoly(std::move(r));
}

inline unsigned long euler_phi_u64(unsigned long n) {
    unsigned long r = n;
    for (unsigned long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            r -= r / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) r -= r / n;
    return r;
}

// k-th cyclotomic polynomial, memoized.  phi_k = (x^k - 1) / prod_{d|k, d<k} phi_d.
inline IntPoly cyclotomic(unsigned long k) {
    static std::map<unsigned long, IntPoly> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    // fill all divisors of k in increasing order
    for (unsigned long j = 1; j <= k; ++j) {
        if (k % j != 0 || cache.count(j)) continue;
        IntPoly phi = IntPoly::x_power(static_cast<unsigned>(j)) - IntPoly{1};
        for (unsigned long e = 1; e < j; ++e)
            if (j % e == 0) phi = divexact(phi, cache.at(e));
        cache.emplace(j, std::move(phi));
    }
    return cache.at(k);
}

// True iff f is, up to sign and a power of x, a product of cyclotomic
// polynomials (so |lead| = 1 and every root is zero or a root of unity).
// When true the Mahler measure is exactly 1.
inline bool is_cyclotomic_product(const IntPoly& f0) {
    if (f0.is_zero()) return false;
    IntPoly f = f0;
    if (abs(f.lead()) != 1) return false;
    // strip powers of x
    size_t v = 0;
    while (f.coeff(static_cast<int>(v)) == 0) ++v;
    if (v > 0) {
        std::vector<mpz_class> c(f.coeffs().begin() + static_cast<long>(v), f.coeffs().end());
        f = IntPoly(std::move(c));
    }
    int deg = f.degree();
    if (deg == 0) return abs(f.coeff(0)) == 1;
    // any cyclotomic factor phi_k of f has phi(k) <= deg f; phi(k) > sqrt(k/2)
    unsigned long bound = 2ul * static_cast<unsigned long>(deg) * static_cast<unsigned long>(deg) + 6;
    for (unsigned long k = 1; k <= bound && f.degree() > 0; ++k) {
        if (euler_phi_u64(k) > static_cast<unsigned long>(f.degree())) continue;
        const IntPoly& phi = cyclotomic(k);
        while (f.degree() >= phi.degree()) {
            auto q = try_divide(f, phi);
            if (!q) break;
            f = *q;
        }
    }
    return f.degree() == 0 && abs(f.coeff(0)) == 1;
}

// ----- Sturm sequences (exact real-root counting) -----

// Signed Sturm chain: remainders are scaled only by positive constants so
// that sign variations are preserved.
inline std::vector<IntPoly> sturm_chain(const IntPoly& f) {
    std::vector<IntPoly> s;
    s.push_back(f.primitive_part());
    IntPoly d = f.derivative();
    if (d.is_zero()) return s;
    s.push_back(d.primitive_part());
    while (true) {
        const IntPoly& a = s[s.size() - 2];
        const IntPoly& b = s.back();
        if (b.degree() < 0) break;
        // remainder of a by b scaled by positive lead(b)^(2k)
        IntPoly r = a;
        const mpz_class lb2 = b.lead() * b.lead();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            int k = r.degree() - b.degree();
            mpz_class lr = r.lead();
            // r = lb^2 * r - (lr * lb) * x^k * b  keeps the scaling positive
            IntPoly t = r * lb2;
            IntPoly sub = b * (lr * b.lead());
            std::vector<mpz_class> shifted(static_cast<size_t>(k), 0);
            for (const auto& c : sub.coeffs()) shifted.push_back(c);
            t = t - IntPoly(std::move(shifted));
            if (!t.is_zero() && t.degree() >= r.degree())
                throw consistency_error("sturm_chain: no degree drop");
            r = std::move(t);
        }
        if (r.is_zero()) break;
        // negate; divide by positive content
        IntPoly nr = -r;
        mpz_class cont = nr.content();
        std::vector<mpz_class> cc(nr.coeffs().size());
        for (size_t i = 0; i < cc.size(); ++i)
            mpz_divexact(cc[i].get_mpz_t(), nr.coeffs()[i].get_mpz_t(), cont.get_mpz_t());
        s.emplace_back(std::move(cc));
        if (s.back().degree() == 0) break;
    }
    return s;
}

inline int sign_variations_at(const std::vector<IntPoly>& chain, const mpq_class& t) {
    int var = 0, last = 0;
    for (const auto& p : chain) {
        int s = sgn(p.eval_mpq(t));
        if (s == 0) continue;
        if (last != 0 && s != last) ++var;
        last = s;
    }
    return var;
}

inline int sign_variations_at_inf(const std::vector<IntPoly>& chain, bool plus) {
    int var = 0, last = 0;
    for (const auto& p : chain) {
        if (p.is_zero()) continue;
        int s = sgn(p.lead());
        if (!plus && p.degree() % 2 == 1) s = -s;
        if (s == 0) continue;
        if (last != 0 && s != last) ++var;
        last = s;
    }
    return var;
}

// number of distinct real roots in (a, b]; requires f squarefree
inline int count_real_roots_in(const std::vector<IntPoly>& chain, const mpq_class& a, const mpq_class& b) {
    return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

inline int count_real_roots(const IntPoly& f) {
    auto chain = sturm_chain(f);
    return sign_variations_at_inf(chain, false) - sign_variations_at_inf(chain, true);
}

// Cauchy root bound as a power of two: every complex root has |rho| < 2^k.
inline long cauchy_root_bound_exp(const IntPoly& f) {
    if (f.degree() < 1) return 0;
    mpz_class mx = 0;
    for (int i = 0; i < f.degree(); ++i) mx = std::max(mx, mpz_class(abs(f.coeff(i))));
    // 1 + max|a_i| / |lead|  <=  1 + max|a_i|  (|lead| >= 1)
    mpz_class bound = 1 + mx / abs(f.lead()) + 1;
    return static_cast<long>(mpz_sizeinbase(bound.get_mpz_t(), 2));
}

}  // namespace smallgen
