#pragma once

#include "medf/bits.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace medf {

// A perfect binary tree given intensionally by its splitting skeleton: the
// map c |-> t_c sending a binary index string to the c-th splitting node.
// Branching structure lives in the index; t_c values carry the actual nodes.
// Required of any rule behind this interface:
//   monotone        c prefix of c'  =>  t_c prefix of t_{c'}
//   successor       t_{c^i} extends t_c^i (so the two successors diverge)
//   lex-preserving  incomparable indices order like their nodes
// Instances are immutable; queries may memoize internally (thread-safe, and
// never observable beyond timing).
class SkeletonTree {
public:
    class Impl;

    SkeletonTree() = default;
    explicit SkeletonTree(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    bool valid() const { return impl_ != nullptr; }

    // t_c.
    Bits skel(const Bits& c) const;

private:
    std::shared_ptr<const Impl> impl_;
};

// The full binary tree; skeleton is the identity.
SkeletonTree full_tree();

// Tree from an arbitrary rule. The rule must be pure; invariants are the
// caller's problem (validate() exists to find out).
SkeletonTree tree_from_rule(std::function<Bits(const Bits&)> rule);

// Deterministic pseudo-random skeleton: t_{c^i} = t_c ^ i ^ padding, padding
// bits drawn from splitmix64(seed, c, i), length < max_pad. Satisfies all
// skeleton invariants by construction.
SkeletonTree seeded_skeleton(std::uint64_t seed, unsigned max_pad);

// Finite table of skeleton values (for deserialized prefixes). Queries
// beyond the stored depth throw InputError.
SkeletonTree tree_from_table(std::map<Bits, Bits> table, unsigned depth);

// Membership of a node string, decided by walking the skeleton to depth
// lh(s): s is in the tree iff it is a prefix of some t_c.
bool contains(const SkeletonTree& tree, const Bits& s);

// The 2^n splitting nodes {t_c : lh(c) = n}, in lex order.
std::vector<Bits> nth_splitting_front(const SkeletonTree& tree, unsigned n);

// The 2^(n+1) immediate successors {t_c^i : lh(c) = n, i in {0,1}}, lex order.
std::vector<Bits> succ_of_nth_front(const SkeletonTree& tree, unsigned n);

// Subtree of everything comparable with t. The new skeleton is
// c |-> t_{c*^c} where c* is the unique minimal index with t a prefix of
// t_{c*} (found by deterministic descent). Throws InputError if t is not in
// the tree.
SkeletonTree restrict(const SkeletonTree& tree, const Bits& t);

// Index c* used by restrict (exposed for bookkeeping and tests).
Bits restrict_index(const SkeletonTree& tree, const Bits& t);

// Composition: the subtree of `outer` whose branches are the outer-embedding
// image of `inner`'s branches; skeleton c |-> outer.skel(inner.skel(c)).
SkeletonTree pullback(const SkeletonTree& outer, const SkeletonTree& inner);

// Longest c with t_c a prefix of s; inverse of skel along a branch.
// Throws InputError if s is not in the tree.
Bits homeo_prefix(const SkeletonTree& tree, const Bits& s);

// Index-translation wrapper used by the fusion machinery: below each base
// index b (all of length base_len) in `grafts`, indices are rerouted through
// b ^ grafts[b] before consulting the parent. restrict() is the base_len = 0
// special case.
SkeletonTree graft_layer(const SkeletonTree& parent, unsigned base_len,
                         std::map<Bits, Bits> grafts);

struct TreeViolation {
    std::string invariant; // "monotone", "successor", "lex-preservation", "front"
    std::string witness;
};

struct TreeReport {
    bool ok = true;
    std::vector<TreeViolation> violations;
};

// Checks all skeleton invariants for indices of length <= depth, plus front
// sizes/incomparability. Violation list is capped, not exhaustive.
TreeReport validate(const SkeletonTree& tree, unsigned depth);

// Branch prefix on the sampled path: follow the skeleton choosing each child
// by branch_bit(seed, coord, step), until the node is at least `min_len`
// long or `max_steps` splitting levels were consumed.
Bits sampled_branch_prefix(const SkeletonTree& tree, std::uint64_t seed,
                           std::uint64_t coord, std::size_t min_len,
                           std::size_t max_steps = 4096);

// Skeleton indices of the sampled path, i.e. the index prefixes the branch
// descends through: lengths 0..depth.
std::vector<Bits> sampled_branch_indices(std::uint64_t seed, std::uint64_t coord,
                                         unsigned depth);

} // namespace medf
