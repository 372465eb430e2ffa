#pragma once

#include <random>

#include "smallgen/intpoly.hpp"

namespace testutil {

using smallgen::IntPoly;

inline std::mt19937_64 rng(0xdecafbad);

inline long rand_int(long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

// random polynomial of exact degree d with |coeffs| <= cmax, nonzero lead
inline IntPoly random_poly(int d, long cmax) {
    std::vector<mpz_class> c(static_cast<size_t>(d) + 1);
    for (int i = 0; i < d; ++i) c[static_cast<size_t>(i)] = rand_int(-cmax, cmax);
    long lead = 0;
    while (lead == 0) lead = rand_int(-cmax, cmax);
    c[static_cast<size_t>(d)] = lead;
    return IntPoly(std::move(c));
}

inline bool encl_contains_mpq(const smallgen::RealEnclosure& e, const mpq_class& v) {
    return e.contains(v);
}

}  // namespace testutil
