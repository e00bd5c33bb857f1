#pragma once

#include "medf/bits.hpp"
#include "medf/nat.hpp"

#include <utility>

namespace medf {

// delta(n, k) = (n+k+1)(n+k)/2 + n, a bijection N x N -> N whose key feature
// is that preimages of {0..m} only use first components <= m.
Nat delta(const Nat& n, const Nat& k);
std::pair<Nat, Nat> delta_inv(const Nat& m);

// Length-lex numbering of binary strings: () -> 0, <0> -> 1, <1> -> 2,
// <0,0> -> 3, ... Order-isomorphism between maxlex and (N, <).
Nat node_index(const Bits& s);
Bits node_unindex(const Nat& m);

// Bijection between finite words over N and N:
// code(()) = 0, code(w^k) = cantor_pair(code(w), k) + 1.
// Bit length doubles per symbol; fine for short words, never feed it long ones.
Nat seq_code(const Word& w);
Word seq_decode(const Nat& m);

// Bijection between equal-length pairs of words and N. Componentwise
// CantorPair zip, then a length-indexed balanced pairing of the zipped word
// (balanced so bit growth stays linear in the word length).
Nat pair_code(const Word& s0, const Word& s1);
std::pair<Word, Word> pair_decode(const Nat& m);

// Component extractors of pair_decode.
Word pair_component(const Nat& m, int which);

} // namespace medf
