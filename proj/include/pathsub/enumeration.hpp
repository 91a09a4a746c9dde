// Deterministic enumeration of the dyadic-rational strict subintervals of [0,1].
//
// Level k >= 1 lists every [p/2^k, q/2^k] with 0 <= p < q <= 2^k except
// [0,1] itself, ordered lexicographically by (p, q). Levels follow one another,
// so intervals reappear at finer levels (e.g. [0,1/2] again as [0/4, 2/4]).
#pragma once

#include "pathsub/exact.hpp"

#include <cstdint>

namespace pathsub {

/// Number of intervals listed at level k: C(2^k + 1, 2) - 1.
inline mpz_class enumeration_level_count(unsigned k)
{
    mpz_class side;
    mpz_ui_pow_ui(side.get_mpz_t(), 2, k);
    return side * (side + 1) / 2 - 1;
}

/// Index of the last interval at level k.
inline mpz_class enumeration_level_end(unsigned k)
{
    mpz_class total = 0;
    for (unsigned j = 1; j <= k; ++j) total += enumeration_level_count(j);
    return total;
}

inline Interval rational_interval_enumeration(std::uint64_t n)
{
    if (n < 1) throw std::invalid_argument("rational_interval_enumeration: index must be >= 1");
    mpz_class rest = n;
    unsigned k = 1;
    while (rest > enumeration_level_count(k)) {
        rest -= enumeration_level_count(k);
        ++k;
    }
    // rest is the 1-based position inside level k.
    mpz_class side;
    mpz_ui_pow_ui(side.get_mpz_t(), 2, k);
    mpz_class p = 0;
    for (;;) {
        // Row p holds q = p+1 .. side, minus (0, side) in row 0.
        mpz_class row = side - p - (p == 0 ? 1 : 0);
        if (rest <= row) break;
        rest -= row;
        ++p;
    }
    const mpz_class q = p + rest;
    return Interval(ExactScalar(p, side), ExactScalar(q, side));
}

} // namespace pathsub
