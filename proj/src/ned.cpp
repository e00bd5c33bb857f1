#include "medf/ned.hpp"

#include "medf/errors.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace medf {

namespace {

Nat nat_of(std::size_t k) { return Nat(static_cast<unsigned long>(k)); }

std::size_t small_index(const Nat& n, const char* what) {
    if (nat_bits(n) > 32)
        throw InputError(std::string(what) + " too large to scan: " + nat_str(n));
    return static_cast<std::size_t>(nat_to_u64(n));
}

void check_shape(const NedInput& input) {
    if (!input.f || !input.h_star || !input.g_star)
        throw InputError("ned input: f, h_star and g_star must all be set");
    if (input.family.size() != input.avoid_bound.size())
        throw InputError("ned input: " + std::to_string(input.family.size()) +
                         " family members but " + std::to_string(input.avoid_bound.size()) +
                         " avoidance bounds");
    for (std::size_t j = 0; j < input.family.size(); ++j)
        if (!input.family[j].fn)
            throw InputError("ned input: family member " + std::to_string(j) + " is not set");
}

void add_violation(NedReport& report, std::string check, std::string witness) {
    report.ok = false;
    if (report.violations.size() < 32)
        report.violations.push_back({std::move(check), std::move(witness)});
}

} // namespace

void spot_check(const NedInput& input, unsigned window) {
    check_shape(input);
    for (std::size_t j = 0; j < input.family.size(); ++j) {
        std::size_t from = small_index(input.avoid_bound[j], "avoidance bound");
        for (std::size_t n = from; n < from + window; ++n) {
            Nat nn = nat_of(n);
            if (input.f(nn) == input.family[j].fn(nn))
                throw CertificateError(
                    "avoidance certificate for member " + std::to_string(j) + " (" +
                    input.family[j].desc + ") fails at " + std::to_string(n) +
                    ": both sides are " + nat_str(input.f(nn)));
        }
    }
}

std::size_t ned_block(const NedInput& input, const Nat& n, std::size_t block_cap) {
    std::size_t k = 0;
    while (k + 1 < block_cap && input.g_star(nat_of(k + 1)) <= n) ++k;
    return k;
}

std::vector<Nat> compute_m_seq(const NedInput& input, std::size_t K) {
    check_shape(input);
    if (K >= input.family.size())
        throw InputError("compute_m_seq: index " + std::to_string(K) +
                         " outside the certified family of size " +
                         std::to_string(input.family.size()));
    spot_check(input);

    std::vector<Nat> out;
    out.reserve(K + 1);
    std::set<Nat> used;
    std::size_t M = 0;
    for (std::size_t k = 0; k <= K; ++k) {
        M = std::max(M, small_index(input.avoid_bound[k], "avoidance bound"));
        // Avoidance of family[0..k] from position m on is certified from M
        // upward, so the least admissible start is one past the last direct
        // collision below M.
        std::size_t start = 0;
        for (std::size_t n = 0; n < M; ++n) {
            Nat nn = nat_of(n);
            Nat fv = input.f(nn);
            for (std::size_t j = 0; j <= k; ++j) {
                if (fv == input.family[j].fn(nn)) {
                    start = n + 1;
                    break;
                }
            }
        }
        Nat m = nat_of(start);
        while (used.count(m)) m += 1;
        used.insert(m);
        out.push_back(m);
    }
    return out;
}

Rule build_h(const NedInput& input, std::size_t horizon) {
    check_shape(input);
    if (input.family.empty()) return input.h_star;

    std::size_t cap = input.family.size();
    Nat hz = nat_of(horizon);
    std::size_t K_used = 0;
    Nat prev = input.g_star(nat_of(0));
    for (std::size_t k = 1; k < cap; ++k) {
        Nat cur = input.g_star(nat_of(k));
        if (cur <= prev)
            throw InputError("g_star must be strictly increasing: g_star(" +
                             std::to_string(k) + ") = " + nat_str(cur) + " <= g_star(" +
                             std::to_string(k - 1) + ") = " + nat_str(prev));
        if (cur < hz) K_used = k;
        prev = cur;
    }

    std::vector<Nat> mseq = compute_m_seq(input, K_used);
    for (std::size_t k = 0; k <= K_used; ++k) {
        Nat gk = input.g_star(nat_of(k));
        if (gk < mseq[k])
            throw DominationError("g_star(" + std::to_string(k) + ") = " + nat_str(gk) +
                                  " is below m_" + std::to_string(k) + " = " +
                                  nat_str(mseq[k]));
    }

    NedInput in = input;
    return [in, cap](const Nat& n) -> Nat {
        std::size_t k = ned_block(in, n, cap);
        Nat hv = in.h_star(n);
        std::vector<Nat> taken;
        taken.reserve(k + 1);
        for (std::size_t j = 0; j <= k; ++j) taken.push_back(in.family[j].fn(n));
        if (std::find(taken.begin(), taken.end(), hv) == taken.end()) return hv;
        Nat c = 0;
        while (std::find(taken.begin(), taken.end(), c) != taken.end()) c += 1;
        return c;
    };
}

NedReport verify_ned(const Rule& h, const NedInput& input, std::size_t horizon) {
    check_shape(input);
    if (!h) throw InputError("verify_ned: h is not set");
    NedReport report;
    std::size_t cap = input.family.size();
    // Below m_0 the construction may be forced away from h_star even where
    // h_star meets f (f itself can collide with family[0] there), so the
    // agreement guarantee starts at m_0.
    std::size_t agree_from = 0;
    if (cap > 0) agree_from = small_index(compute_m_seq(input, 0)[0], "m_0");
    for (std::size_t n = 0; n < horizon; ++n) {
        Nat nn = nat_of(n);
        Nat hv = h(nn);
        Nat fv = input.f(nn);
        if (n >= agree_from && input.h_star(nn) == fv && hv != fv)
            add_violation(report, "agreement",
                          "h_star and f agree on " + nat_str(fv) + " at " + std::to_string(n) +
                              " but h(" + std::to_string(n) + ") = " + nat_str(hv));
        if (cap == 0) continue;
        std::size_t k = ned_block(input, nn, cap);
        for (std::size_t j = 0; j <= k; ++j)
            if (hv == input.family[j].fn(nn))
                add_violation(report, "avoidance",
                              "h(" + std::to_string(n) + ") = " + nat_str(hv) +
                                  " collides with family member " + std::to_string(j) +
                                  " inside block " + std::to_string(k));
    }
    return report;
}

} // namespace medf
