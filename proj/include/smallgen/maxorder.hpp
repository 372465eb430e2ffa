#pragma once

#include <vector>

#include "smallgen/intpoly.hpp"
#include "smallgen/zutil.hpp"

namespace smallgen {

// v_p([O_K : Z[theta]]) by the Pohst-Zassenhaus enlargement loop: starting
// from Z[theta], repeatedly replace the order O by the ring multiplier of
// the p-radical of O/pO until it stabilizes.  Dedekind's criterion only
// certifies the *given* power basis; fields with common index divisors
// (e.g. a quartic in which p = 3 splits completely) have no p-maximal
// power basis at all, so discriminant certification needs this.
//
// Word-sized p only; callers treat larger p as undecidable.

namespace maxorder_detail {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;  // rows = basis elements in power coordinates
using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<ZVec>;

inline QVec mul_mod_g(const QVec& a, const QVec& b, const IntPoly& g) {
    size_t n = static_cast<size_t>(g.degree());
    QVec prod(2 * n - 1, 0);
    for (size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < n; ++j)
            if (b[j] != 0) prod[i + j] += a[i] * b[j];
    }
    for (size_t k = prod.size(); k-- > n;) {
        mpq_class c = prod[k];
        if (c == 0) continue;
        prod[k] = 0;
        for (int i = 0; i < g.degree(); ++i)
            prod[k - n + static_cast<size_t>(i)] -= c * mpq_class(g.coeff(i));
    }
    prod.resize(n);
    return prod;
}

// exact inverse of a square rational matrix (rows x columns)
inline QMat invert(const QMat& a0) {
    size_t n = a0.size();
    QMat m(n, QVec(2 * n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) m[i][j] = a0[i][j];
        m[i][n + i] = 1;
    }
    for (size_t col = 0, row = 0; col < n; ++col) {
        size_t piv = row;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) throw consistency_error("maxorder: singular basis");
        std::swap(m[piv], m[row]);
        mpq_class inv = 1 / m[row][col];
        for (size_t j = 0; j < 2 * n; ++j) m[row][j] *= inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == row || m[i][col] == 0) continue;
            mpq_class f = m[i][col];
            for (size_t j = col; j < 2 * n; ++j) m[i][j] -= f * m[row][j];
        }
        ++row;
    }
    QMat inv(n, QVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
    return inv;
}

// row vector x times matrix M
inline QVec vec_mat(const QVec& x, const QMat& m) {
    size_t n = m.size();
    QVec r(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < n; ++j)
            if (m[i][j] != 0) r[j] += x[i] * m[i][j];
    }
    return r;
}

// Hermite-style triangular basis of the full-rank lattice in Z^n generated
// by `rows` (upper triangular: basis[k] has its pivot at column k).
inline ZMat lattice_hnf(ZMat rows, size_t n) {
    ZMat basis(n);
    // column-by-column gcd elimination
    for (size_t col = 0; col < n; ++col) {
        while (true) {
            int best = -1;
            for (size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                bool leading = true;
                for (size_t j = 0; j < col; ++j)
                    if (rows[i][j] != 0) { leading = false; break; }
                if (!leading) continue;
                if (best < 0 ||
                    abs(rows[i][col]) < abs(rows[static_cast<size_t>(best)][col]))
                    best = static_cast<int>(i);
            }
            if (best < 0) throw consistency_error("lattice_hnf: rank deficiency");
            bool again = false;
            for (size_t i = 0; i < rows.size(); ++i) {
                if (static_cast<int>(i) == best || rows[i][col] == 0) continue;
                bool leading = true;
                for (size_t j = 0; j < col; ++j)
                    if (rows[i][j] != 0) { leading = false; break; }
                if (!leading) continue;
                mpz_class q = rows[i][col] / rows[static_cast<size_t>(best)][col];
                for (size_t j = col; j < n; ++j)
                    rows[i][j] -= q * rows[static_cast<size_t>(best)][j];
                if (rows[i][col] != 0) again = true;
            }
            if (!again) {
                ZVec piv = rows[static_cast<size_t>(best)];
                if (piv[col] < 0)
                    for (auto& v : piv) v = -v;
                basis[col] = std::move(piv);
                rows.erase(rows.begin() + best);
                break;
            }
        }
    }
    return basis;
}

}  // namespace maxorder_detail

inline unsigned long p_index_valuation(const IntPoly& g, const mpz_class& pz) {
    using namespace maxorder_detail;
    if (!g.is_monic()) throw std::invalid_argument("p_index_valuation: g must be monic");
    if (mpz_sizeinbase(pz.get_mpz_t(), 2) > 62)
        throw precision_error("p_index_valuation: p exceeds the word range");
    const u64 p = mpz_get_ui(pz.get_mpz_t());
    const size_t n = static_cast<size_t>(g.degree());
    auto inv_mod_p = [&](u64 x) { return powmod_u64(x % p, p - 2, p); };

    QMat W(n, QVec(n, 0));  // order basis, rows in power coordinates
    for (size_t i = 0; i < n; ++i) W[i][i] = 1;

    bool maximal = false;
    for (int iteration = 0; iteration < 600 && !maximal; ++iteration) {
        QMat Winv = invert(W);

        // exact integer structure constants: w_i w_j in basis coordinates
        ZMat sc(n * n, ZVec(n));
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i; j < n; ++j) {
                QVec prod = mul_mod_g(W[i], W[j], g);
                QVec c = vec_mat(prod, Winv);
                for (size_t k = 0; k < n; ++k) {
                    if (c[k].get_den() != 1)
                        throw consistency_error("p_index_valuation: basis not closed");
                    sc[i * n + j][k] = c[k].get_num();
                    sc[j * n + i][k] = c[k].get_num();
                }
            }
        }
        auto sc_mod = [&](size_t i, size_t j, size_t k) -> u64 {
            mpz_class r = sc[i * n + j][k] % static_cast<unsigned long>(p);
            if (r < 0) r += static_cast<unsigned long>(p);
            return mpz_get_ui(r.get_mpz_t());
        };

        // multiplication in A = O/pO
        auto amul = [&](const std::vector<u64>& a, const std::vector<u64>& b) {
            std::vector<u64> r(n, 0);
            for (size_t i = 0; i < n; ++i) {
                if (a[i] == 0) continue;
                for (size_t j = 0; j < n; ++j) {
                    if (b[j] == 0) continue;
                    u64 f = mulmod_u64(a[i], b[j], p);
                    if (f == 0) continue;
                    for (size_t k = 0; k < n; ++k)
                        r[k] = (r[k] + mulmod_u64(f, sc_mod(i, j, k), p)) % p;
                }
            }
            return r;
        };
        // x^p in A
        auto apow_p = [&](const std::vector<u64>& x, const std::vector<u64>& one) {
            std::vector<u64> acc = one, b = x;
            u64 e = p;
            while (e) {
                if (e & 1) acc = amul(acc, b);
                e >>= 1;
                if (e) b = amul(b, b);
            }
            return acc;
        };
        std::vector<u64> one(n, 0);
        {
            QVec pw(n, 0);
            pw[0] = 1;
            QVec c1 = vec_mat(pw, Winv);
            for (size_t k = 0; k < n; ++k) {
                if (c1[k].get_den() != 1)
                    throw consistency_error("p_index_valuation: 1 not in the order");
                mpz_class r = c1[k].get_num() % static_cast<unsigned long>(p);
                if (r < 0) r += static_cast<unsigned long>(p);
                one[k] = mpz_get_ui(r.get_mpz_t());
            }
        }

        // radical of A: kernel of x -> x^(p^s), p^s >= n
        size_t steps = 1;
        for (u64 pk = p; pk < n; pk *= p) ++steps;
        std::vector<std::vector<u64>> frob(n);
        for (size_t i = 0; i < n; ++i) {
            std::vector<u64> v(n, 0);
            v[i] = 1;
            for (size_t s = 0; s < steps; ++s) v = apow_p(v, one);
            frob[i] = v;
        }
        std::vector<std::vector<u64>> m(n, std::vector<u64>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k) m[k][i] = frob[i][k];
        std::vector<int> pivot_of_row(n, -1);
        std::vector<bool> pivot_col(n, false);
        size_t rank = 0;
        for (size_t col = 0; col < n && rank < n; ++col) {
            size_t piv = rank;
            while (piv < n && m[piv][col] == 0) ++piv;
            if (piv == n) continue;
            std::swap(m[piv], m[rank]);
            u64 inv = inv_mod_p(m[rank][col]);
            for (size_t j = 0; j < n; ++j) m[rank][j] = mulmod_u64(m[rank][j], inv, p);
            for (size_t i = 0; i < n; ++i) {
                if (i == rank || m[i][col] == 0) continue;
                u64 f = m[i][col];
                for (size_t j = 0; j < n; ++j) {
                    u64 sub = mulmod_u64(f, m[rank][j], p);
                    m[i][j] = (m[i][j] + p - sub) % p;
                }
            }
            pivot_of_row[rank] = static_cast<int>(col);
            pivot_col[col] = true;
            ++rank;
        }
        std::vector<std::vector<u64>> kernel;
        for (size_t col = 0; col < n; ++col) {
            if (pivot_col[col]) continue;
            std::vector<u64> v(n, 0);
            v[col] = 1;
            for (size_t r2 = 0; r2 < rank; ++r2)
                v[static_cast<size_t>(pivot_of_row[r2])] = (p - m[r2][col]) % p;
            kernel.push_back(v);
        }

        // ideal I = radical preimage: triangular Z-basis in O-coordinates
        ZMat gens;
        for (auto& v : kernel) {
            ZVec r(n);
            for (size_t k = 0; k < n; ++k) r[k] = static_cast<unsigned long>(v[k]);
            gens.push_back(std::move(r));
        }
        for (size_t i = 0; i < n; ++i) {
            ZVec r(n, 0);
            r[i] = pz;
            gens.push_back(std::move(r));
        }
        ZMat T = lattice_hnf(std::move(gens), n);

        // U = {x in A : x I <= p I}: for each ideal basis element t_j the map
        // x -> I-coordinates of (x t_j) mod p is linear in x; stack all
        // constraints and take the kernel
        // coords of w_i t_j in O-coordinates (exact)
        auto o_coords_mul = [&](size_t i, const ZVec& t) {
            ZVec r(n, 0);
            for (size_t l = 0; l < n; ++l) {
                if (t[l] == 0) continue;
                const ZVec& s = sc[i * n + l];
                for (size_t k = 0; k < n; ++k) r[k] += t[l] * s[k];
            }
            return r;
        };
        // I-coordinates by forward substitution: T[k] has its first nonzero
        // entry at column k
        auto i_coords = [&](ZVec u) {
            ZVec y(n, 0);
            for (size_t k = 0; k < n; ++k) {
                if (!mpz_divisible_p(u[k].get_mpz_t(), T[k][k].get_mpz_t()))
                    throw consistency_error("p_index_valuation: product outside the ideal");
                mpz_class q = u[k] / T[k][k];
                y[k] = q;
                if (q != 0)
                    for (size_t j = k; j < n; ++j) u[j] -= q * T[k][j];
            }
            return y;
        };
        std::vector<std::vector<u64>> constraints;  // rows over unknowns x_0..x_{n-1}
        for (size_t j = 0; j < n; ++j) {
            // column k of the constraint block: for unknown i, the k-th
            // I-coordinate of w_i t_j
            std::vector<ZVec> coords(n);
            for (size_t i = 0; i < n; ++i) coords[i] = i_coords(o_coords_mul(i, T[j]));
            for (size_t k = 0; k < n; ++k) {
                std::vector<u64> row(n);
                bool nonzero = false;
                for (size_t i = 0; i < n; ++i) {
                    mpz_class r = coords[i][k] % static_cast<unsigned long>(p);
                    if (r < 0) r += static_cast<unsigned long>(p);
                    row[i] = mpz_get_ui(r.get_mpz_t());
                    nonzero = nonzero || row[i] != 0;
                }
                if (nonzero) constraints.push_back(std::move(row));
            }
        }
        // kernel of the constraint matrix over F_p
        std::vector<std::vector<u64>>& cm = constraints;
        size_t crank = 0;
        std::vector<int> cpivot_row;
        std::vector<bool> cpivot(n, false);
        for (size_t col = 0; col < n && crank < cm.size(); ++col) {
            size_t piv = crank;
            while (piv < cm.size() && cm[piv][col] == 0) ++piv;
            if (piv == cm.size()) continue;
            std::swap(cm[piv], cm[crank]);
            u64 inv = inv_mod_p(cm[crank][col]);
            for (size_t j = 0; j < n; ++j) cm[crank][j] = mulmod_u64(cm[crank][j], inv, p);
            for (size_t i = 0; i < cm.size(); ++i) {
                if (i == crank || cm[i][col] == 0) continue;
                u64 f = cm[i][col];
                for (size_t j = 0; j < n; ++j) {
                    u64 sub = mulmod_u64(f, cm[crank][j], p);
                    cm[i][j] = (cm[i][j] + p - sub) % p;
                }
            }
            cpivot_row.push_back(static_cast<int>(col));
            cpivot[col] = true;
            ++crank;
        }
        std::vector<std::vector<u64>> uker;
        for (size_t col = 0; col < n; ++col) {
            if (cpivot[col]) continue;
            std::vector<u64> v(n, 0);
            v[col] = 1;
            for (size_t r2 = 0; r2 < crank; ++r2)
                v[static_cast<size_t>(cpivot_row[r2])] = (p - cm[r2][col]) % p;
            uker.push_back(v);
        }
        if (uker.empty()) {
            maximal = true;
            break;
        }

        // enlarge: O' spanned by O and the u/p
        // scale everything to the common denominator p over the CURRENT
        // basis: rows p*e_i (the old basis) and the kernel lifts
        ZMat rows;
        for (size_t i = 0; i < n; ++i) {
            ZVec r(n, 0);
            r[i] = pz;
            rows.push_back(std::move(r));
        }
        for (auto& v : uker) {
            ZVec r(n);
            for (size_t k = 0; k < n; ++k) r[k] = static_cast<unsigned long>(v[k]);
            rows.push_back(std::move(r));
        }
        ZMat nb = lattice_hnf(std::move(rows), n);  // new basis over p, in O-coords
        QMat W2(n, QVec(n, 0));
        for (size_t i = 0; i < n; ++i) {
            // (1/p) * sum_k nb[i][k] w_k in power coordinates
            for (size_t k = 0; k < n; ++k) {
                if (nb[i][k] == 0) continue;
                for (size_t c = 0; c < n; ++c)
                    W2[i][c] += mpq_class(nb[i][k]) * W[k][c];
            }
            for (size_t c = 0; c < n; ++c) W2[i][c] /= pz;
        }
        W = std::move(W2);
    }
    if (!maximal) throw consistency_error("p_index_valuation: enlargement did not stabilize");

    // v_p(index) = -v_p(det W)
    // det via exact Gaussian elimination
    QMat m = W;
    mpq_class det = 1;
    size_t nn = m.size();
    for (size_t col = 0, row = 0; col < nn; ++col) {
        size_t piv = row;
        while (piv < nn && m[piv][col] == 0) ++piv;
        if (piv == nn) throw consistency_error("p_index_valuation: singular final basis");
        if (piv != row) {
            std::swap(m[piv], m[row]);
            det = -det;
        }
        det *= m[row][col];
        mpq_class inv = 1 / m[row][col];
        for (size_t j = col; j < nn; ++j) m[row][j] *= inv;
        for (size_t i = row + 1; i < nn; ++i) {
            if (m[i][col] == 0) continue;
            mpq_class f = m[i][col];
            for (size_t j = col; j < nn; ++j) m[i][j] -= f * m[row][j];
        }
        ++row;
    }
    // det = +-1 / p^v
    mpz_class den = mpq_class(abs(det)).get_den();
    unsigned long v = 0;
    while (mpz_divisible_p(den.get_mpz_t(), pz.get_mpz_t())) {
        den /= pz;
        ++v;
    }
    if (den != 1) throw consistency_error("p_index_valuation: non-p denominator in the index");
    return v;
}

// exact v_p(Delta_K) for the field defined by monic irreducible g
inline unsigned long p_disc_valuation(const IntPoly& g, const mpz_class& disc_g,
                                      const mpz_class& p) {
    unsigned long vd = 0;
    mpz_class d = abs(disc_g);
    while (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) {
        d /= p;
        ++vd;
    }
    unsigned long vi = p_index_valuation(g, p);
    if (2 * vi > vd) throw consistency_error("p_disc_valuation: index exceeds the discriminant");
    return vd - 2 * vi;
}

}  // namespace smallgen
