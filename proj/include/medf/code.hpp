#pragma once

#include "medf/bits.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace medf {

// Monotone code for a continuous function: apply maps input prefixes to
// output prefixes (s prefix of s' implies apply(s) prefix of apply(s')), and
// modulus(n) = D(n) promises lh(apply(s)) >= n once lh(s) >= D(n).
class Code {
public:
    virtual ~Code() = default;
    virtual Word apply(const Bits& s) const = 0;
    virtual std::size_t modulus(std::size_t n) const = 0;
};

using CodePtr = std::shared_ptr<const Code>;

// Same idea on tuples of input prefixes, monotone with respect to the tuple
// order (componentwise prefixes, possibly longer tuples). The modulus bounds
// the minimum coordinate length of full-arity tuples.
class ProductCode {
public:
    virtual ~ProductCode() = default;
    virtual unsigned arity() const = 0;
    virtual Word apply(const std::vector<Bits>& tuple) const = 0;
    virtual std::size_t modulus(std::size_t n) const = 0;
};

using ProductCodePtr = std::shared_ptr<const ProductCode>;

// Deterministic finite-state transducer over input bits. The induced code is
// monotone by construction; it is proper iff every cycle in the transition
// graph emits at least one symbol.
struct TransducerSpec {
    struct Arc {
        unsigned to = 0;
        Word out;
    };
    std::vector<std::string> states;        // names; index is the state id
    unsigned start = 0;
    unsigned arity = 1;
    std::vector<std::array<Arc, 2>> arcs;   // arcs[state][bit]
};

// Arity-1 transducer as a Code. Throws InputError unless arity == 1.
CodePtr transducer_code(const TransducerSpec& spec);

// Transducer of any arity >= 1 as a ProductCode; coordinates are consumed
// round-robin up to the minimum coordinate length (square evaluation), so
// tuples missing coordinates produce the empty word.
ProductCodePtr transducer_product_code(const TransducerSpec& spec);

// States of some silent cycle (consecutive, first repeated implicitly), if
// the zero-output subgraph has one. Empty result = proper transducer.
std::optional<std::vector<std::string>> transducer_silent_cycle(const TransducerSpec& spec);

// Finite table for inputs of length <= depth plus a tail rule beyond it.
enum class TableTail { repeat_last, zeros };
CodePtr table_code(unsigned depth, std::map<Bits, Word> table, TableTail tail);

// Arity-0 product: apply(()) is a fixed word. Properness necessarily fails
// beyond lh(out); the modulus is honest about it only up to that length.
ProductCodePtr const_product_code(Word out);

// Arity-1 view of a plain code.
ProductCodePtr product_of(CodePtr code);

// Convenience specs used all over the tests: echo emits each input bit;
// const_emit emits `value` for each input bit.
TransducerSpec echo_spec();
TransducerSpec const_emit_spec(const Nat& value);

// A branch as a bit oracle: position -> bit.
using BranchBits = std::function<std::uint8_t(std::size_t)>;

BranchBits branch_constant(std::uint8_t bit);
BranchBits branch_from_prefix(Bits prefix, std::uint8_t fill);

inline Bits branch_prefix(const BranchBits& x, std::size_t n) {
    Bits out(n, 0);
    for (std::size_t i = 0; i < n; ++i) out[i] = x(i);
    return out;
}

// apply() with the order of arguments the call sites read best.
inline Word eval_prefix(const Code& f, const Bits& s) { return f.apply(s); }

// First n values of the continuous function on branch x; throws ModulusError
// if the code's own modulus fails to deliver n outputs.
Word eval_star(const Code& f, const BranchBits& x, std::size_t n);

// Square-prefix evaluation of a product code on one input prefix per
// coordinate, each cut to length `depth`.
Word eval_product_prefix(const ProductCode& f, const std::vector<BranchBits>& xs,
                         std::size_t depth);

// First n values of the induced function on a branch tuple.
Word eval_product_star(const ProductCode& f, const std::vector<BranchBits>& xs,
                       std::size_t n);

struct CodeViolation {
    std::string kind; // "monotone", "modulus", "cycle-emission"
    std::string witness;
};

struct CodeReport {
    bool ok = true;
    std::vector<CodeViolation> violations;
};

// Monotonicity on all inputs of length <= depth, modulus soundness for every
// n whose D(n) <= depth (exhaustively over inputs of length D(n)), and the
// cycle-emission property when a transducer spec is supplied.
CodeReport validate_code(const Code& f, unsigned depth,
                         const TransducerSpec* spec = nullptr);

// Square-tuple analogue for product codes.
CodeReport validate_product_code(const ProductCode& f, unsigned depth);

} // namespace medf
