#pragma once

#include "medf/catching.hpp"
#include "medf/code.hpp"
#include "medf/family.hpp"
#include "medf/tree.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace medf {

// A condition in a finite-arity perfect-tree product: one skeleton per
// coordinate. Branch tuples pick one branch per coordinate.
struct ProductCondition {
    std::vector<SkeletonTree> coords;
    unsigned arity() const { return static_cast<unsigned>(coords.size()); }
};

ProductCondition full_product(unsigned arity);
ProductCondition seeded_product(std::uint64_t seed, unsigned arity, unsigned max_pad);

// q refines p coordinatewise (every skeleton node of q is a node of p, for
// indices of length <= depth) and, on the coordinates in S, the n-th
// splitting fronts coincide. S = {} degenerates to the plain subtree check.
bool refines_mod(const ProductCondition& q, const ProductCondition& p,
                 const std::set<unsigned>& S, unsigned n, unsigned depth);

// All tuples over coordinates k < min(n, arity) of level-n splitting front
// nodes, in lex order of tuples (coordinate 0 most significant).
std::vector<std::vector<Bits>> tuple_front(const ProductCondition& p, unsigned n);

// Coordinatewise restriction below the named nodes; unnamed coordinates are
// untouched. Throws InputError naming the coordinate if a node is not in its
// tree.
ProductCondition with_tuple(const ProductCondition& p, const std::map<unsigned, Bits>& nodes);

// One processed front tuple of the fusion: at stage `stage`, the front tuple
// `tuple` (nodes of the previous stage's condition at index tuple `indices`)
// was extended to the full-arity node tuple d, and position m with value
// f(d)(m) was claimed for h0.
struct FrontRow {
    unsigned stage = 0;
    std::vector<Bits> indices; // front index tuple, min(stage, arity) entries
    std::vector<Bits> tuple;   // nodes at those indices, previous stage
    std::vector<Bits> d;       // chosen full-arity node tuple
    Nat m;                     // claimed position
    Nat value;                 // f(d)(m) = h0(m)
};

struct ProductCatchResult {
    unsigned arity = 0;
    unsigned depth = 0;                              // stages processed
    ProductCondition condition;                      // condition after the last stage
    std::vector<ProductCondition> stage_conditions;  // stages 0..depth
    std::vector<FrontRow> rows;                      // processing order
    std::map<Nat, Nat> h0;
    std::function<Nat(const Nat&)> h;                // totalized
};

// The fusion: stage n = 1..depth walks the stage-(n-1) tuple front in lex
// order; each tuple is extended down its all-zero chains to the least depth
// covering the least fresh position whose value avoids family[j](m) for all
// j <= m; the condition is narrowed below the chosen nodes (same-stage
// choices under a shared front node accumulate). h is the h0 table filled
// out with 1 + max{family[j](n) : j <= n} (0 for the empty family).
// Starts from the full product; the _from variant takes any starting
// condition. Throws SearchCapExhausted when a tuple's chain exceeds
// search_cap without finding a position - the signal that the eventual-
// difference hypothesis fails for these inputs.
ProductCatchResult catch_product(unsigned arity, ProductCodePtr f, const EDFamily& family,
                                 unsigned search_cap, unsigned depth);
ProductCatchResult catch_product_from(const ProductCondition& start, ProductCodePtr f,
                                      const EDFamily& family, unsigned search_cap,
                                      unsigned depth);

// Re-derives the claims of a ProductCatchResult:
//   agreement    f(d)(m) = h(m) = recorded value on every processed row
//   freshness    all claimed positions distinct; d injective (arity >= 1)
//   avoidance    h(n) != family[j](n) for j <= n < horizon
//   branch       for each of sample_branches sampled branch tuples and each
//                stage, exactly one row has d below the branch tuple, and
//                the branch's limit function agrees with h at that row's m
// Branch b descends coordinate k by branch_bit(seed, b*arity + k, step).
// Stage-over-stage refinement is a separate claim; check it directly with
// refines_mod on the stage_conditions (it re-walks whole skeletons, so it is
// priced for small depths).
CatchReport verify_product_catch(const ProductCatchResult& result, unsigned arity,
                                 const ProductCode& f, const EDFamily& family, unsigned depth,
                                 unsigned sample_branches, std::uint64_t seed,
                                 unsigned horizon = 1000);

struct GreedyStage {
    std::function<Nat(const Nat&)> h;
    ProductCondition condition;
    ProductCatchResult result;
};

// Finite-stage greedy construction: stage k catches codes[k] against the
// family [h_0 .. h_{k-1}] ++ seed_family, so h_k disagrees with h_j
// everywhere from index j on, and with seed member s from index k + s on.
// The certificates of the grown family record exactly those bounds.
std::vector<GreedyStage> greedy_med_stage(const std::vector<ProductCodePtr>& codes,
                                          const EDFamily& seed_family, unsigned search_cap,
                                          unsigned depth);

// The stage-k family the greedy construction uses (exposed for tests and
// the CLI): earlier outputs first, then the seed members, certificates as
// described above.
EDFamily greedy_stage_family(const std::vector<std::function<Nat(const Nat&)>>& done,
                             const EDFamily& seed_family);

} // namespace medf
