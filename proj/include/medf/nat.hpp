#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace medf {

// Unbounded natural number. Coding bijections grow fast enough (seq_code is
// doubly exponential in word length) that fixed-width integers are not an
// option anywhere near the value plane.
using Nat = mpz_class;

inline std::string nat_str(const Nat& n) { return n.get_str(); }

inline Nat nat_from_str(const std::string& s) { return Nat(s); }

inline std::uint64_t nat_to_u64(const Nat& n) {
    // Callers only do this for structural quantities (lengths, indices).
    return mpz_get_ui(n.get_mpz_t());
}

// (a+b)(a+b+1)/2 + a, the classic pairing on N x N.
inline Nat cantor_pair(const Nat& a, const Nat& b) {
    Nat s = a + b;
    return s * (s + 1) / 2 + a;
}

inline void cantor_unpair(const Nat& m, Nat& a, Nat& b) {
    // s = floor((sqrt(8m+1) - 1) / 2) is exact with integer sqrt.
    Nat t = 8 * m + 1;
    Nat r;
    mpz_sqrt(r.get_mpz_t(), t.get_mpz_t());
    Nat s = (r - 1) / 2;
    Nat tri = s * (s + 1) / 2;
    a = m - tri;
    b = s - a;
}

// Number of bits of n (0 for n = 0).
inline std::size_t nat_bits(const Nat& n) {
    if (n == 0) return 0;
    return mpz_sizeinbase(n.get_mpz_t(), 2);
}

} // namespace medf
