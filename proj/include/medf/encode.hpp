#pragma once

#include "medf/bits.hpp"
#include "medf/nat.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace medf {

// A total rule N -> N given by code.
using Rule = std::function<Nat(const Nat&)>;

// First `len` values of a rule as a word.
Word rule_prefix(const Rule& f, std::size_t len);

// Deterministic pseudo-random rule with values in [0, bound). Derived from
// splitmix64, so fixtures built on it reproduce across platforms.
Rule seeded_rule(std::uint64_t seed, std::uint64_t bound = 1000);

// Interleaved encoding of a pair of rules into one rule:
//   g(2k)   = h(k)
//   g(2k+1) = pair_code(first 2k+1 values of h, first 2k+1 values of z).
// Even positions carry h verbatim; odd positions carry joint history, so a
// single value of g pins ever longer prefixes of both inputs.
Nat encode_g(const Rule& h, const Rule& z, const Nat& n);

// First `len` values of the encoding. Equals encode_g at every position but
// shares the value cache across positions, so prefer it for whole tables.
Word encode_prefix(const Rule& h, const Rule& z, std::size_t len);

struct EncodedFunction {
    Rule h;
    Rule z;

    Nat value(const Nat& n) const { return encode_g(h, z, n); }
    Word prefix(std::size_t len) const { return encode_prefix(h, z, len); }
};

// Structural soundness of a claimed encoding prefix. Empty result means
// coherent. Checks, for every odd position p and its decoded components
// (c0, c1) = pair_decode(g[p]):
//   - c0 and c1 have length exactly p;
//   - c0 agrees with the even entries of g in range (g[2k] = c0[k]);
//   - components at earlier odd positions are prefixes of later ones.
// Violations are capped at 32 entries.
std::vector<std::string> coherence_violations(const Word& gPrefix);
bool coherence_check(const Word& gPrefix);

// Inverse of encode_prefix. For a coherent prefix of even length 2m, the
// last odd entry g[2m-1] already codes both input histories, so the result
// is the pair of length-(2m-1) prefixes of (h, z). The empty prefix decodes
// to a pair of empty words. Throws InputError on odd length or on any
// coherence violation.
std::pair<Word, Word> decode_g(const Word& gPrefix);

// n |-> f(2n), the part of f an encoding copies from h.
Rule even_restriction(const Rule& f);

// Positions 2n < horizon with h(n) = f(2n), i.e. the even positions where
// the encoding of (h, z) meets f. If h agrees with even_restriction(f)
// infinitely often, the encoding is not eventually different from f even
// though it also carries z.
std::vector<Nat> transfer_agreement(const Rule& h, const Rule& z,
                                    const Rule& f, std::size_t horizon);

} // namespace medf
