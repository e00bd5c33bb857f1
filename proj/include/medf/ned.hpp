#pragma once

#include "medf/encode.hpp"
#include "medf/family.hpp"
#include "medf/nat.hpp"

#include <string>
#include <vector>

namespace medf {

// Instance data for the agreement-preserving avoidance construction: a rule
// f to stay close to, a finite list of rules to eventually avoid with
// per-member certificates (f(n) != family[j](n) for all n >= avoid_bound[j]),
// the rule h_star whose agreements with f must survive, and a strictly
// increasing block schedule g_star.
struct NedInput {
    Rule f;
    std::vector<EDFamily::Member> family;
    std::vector<Nat> avoid_bound;
    Rule h_star;
    Rule g_star;
};

// Direct check of every avoidance certificate on
// [avoid_bound[j], avoid_bound[j] + window). Throws CertificateError.
void spot_check(const NedInput& input, unsigned window = 64);

// Block index of position n: the largest k < block_cap with g_star(k) <= n,
// and 0 when n < g_star(0).
std::size_t ned_block(const NedInput& input, const Nat& n, std::size_t block_cap);

// m_0..m_K, where m_k is the least position not among m_0..m_{k-1} from
// which f avoids every one of family[0..k] for good. The unbounded "for
// good" is decided by the certificates: beyond max_{j<=k} avoid_bound[j]
// avoidance is certified, below it each position is checked directly.
// Spot-checks the certificates first.
std::vector<Nat> compute_m_seq(const NedInput& input, std::size_t K);

// The piecewise rule of the construction: on block k (positions in
// [g_star(k), g_star(k+1)), block 0 extended down to 0), copy h_star unless
// its value collides with one of family[0..k](n), in which case take the
// least value missing from that set. Block indices are capped at the last
// family member. Validates that g_star is strictly increasing across the
// family's block range and dominates the m-sequence on every block touching
// [0, horizon); throws DominationError when g_star(k) < m_k.
Rule build_h(const NedInput& input, std::size_t horizon);

struct NedViolation {
    std::string check; // "agreement", "avoidance"
    std::string witness;
};

struct NedReport {
    bool ok = true;
    std::vector<NedViolation> violations;
};

// Re-derives the two promised properties of a claimed h on [0, horizon):
//   agreement: from m_0 on, wherever h_star(n) = f(n), also h(n) = f(n)
//     (below m_0 even f itself may collide with family[0], which can push
//     the construction away from h_star there);
//   avoidance: h(n) differs from family[j](n) for every j up to n's block.
NedReport verify_ned(const Rule& h, const NedInput& input, std::size_t horizon);

} // namespace medf
