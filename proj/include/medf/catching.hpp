#pragma once

#include "medf/code.hpp"
#include "medf/orders.hpp"
#include "medf/tree.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace medf {

// One row of the catching bookkeeping: the splitting node picked for index
// string c, the output position it is responsible for, and the caught value.
struct CatchRow {
    Bits node;  // t_c
    Nat index;  // node_index(c)
    Nat value;  // f(t_c)(index)
};

// Output of the single-tree catching construction. q's skeleton is exactly
// c |-> t_c; h is total because node_index is a bijection. The fields are
// plain functions so tests can forge perturbed results for the verifier.
struct CatchResult {
    SkeletonTree q;
    std::function<std::optional<Nat>(const Nat&)> h;
    std::function<CatchRow(const Bits&)> trace;
};

// Builds h and q <= p such that h(node_index(c)) = f(t_c)(node_index(c)) for
// every index string c. Each t_c is found deterministically: descend to the
// first splitting node of p extending the required stem, then follow 0-side
// children until f's output covers the needed position. Throws ModulusError
// if the code's modulus fails to deliver within its own bound.
CatchResult catch_single(const SkeletonTree& p, CodePtr f);

struct CatchViolation {
    std::string check; // "membership", "splitting", "successor", "domain", "agreement", "trace"
    std::string witness;
};

struct CatchReport {
    bool ok = true;
    std::vector<CatchViolation> violations;
};

// Re-derives every claim of the construction for index strings of length
// <= depth: t_c is a splitting node of p, t_{c^i} extends t_c^i, the code's
// output at t_c covers node_index(c), h agrees with it there, and the trace
// rows match the skeleton.
CatchReport verify_catch(const CatchResult& result, const SkeletonTree& p, const Code& f,
                         unsigned depth);

// A full branch through `tree` as a lazy bit oracle, descending the skeleton
// by the seeded sampling contract.
BranchBits tree_branch(const SkeletonTree& tree, std::uint64_t seed, std::uint64_t coord);

// Agreement points h(n) = f*(x)(n) collected along the sampled branch of
// result.q: one per skeleton level 0..levels, n = node_index of the level's
// index prefix. Throws CertificateError on any mismatch.
std::vector<std::pair<Nat, Nat>> branch_agreements(const CatchResult& result, const Code& f,
                                                   std::uint64_t seed, std::uint64_t coord,
                                                   unsigned levels);

// Deterministic pseudo-random transducer spec with every cycle emitting, for
// property tests and CLI demo instances. States, arcs and outputs are drawn
// from splitmix64(seed); silent cycles are repaired by adding an output on
// the first offending arc, so the result always validates as proper.
TransducerSpec seeded_proper_transducer(std::uint64_t seed, unsigned max_states = 4,
                                        unsigned arity = 1);

} // namespace medf
