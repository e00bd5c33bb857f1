#pragma once

#include "medf/nat.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace medf {

// A finite list of total functions N -> N with pairwise eventual-difference
// certificates: cert(i, j) is a bound b with members[i](n) != members[j](n)
// for all n >= b. Certificates are supplier claims, spot-checked on a finite
// window at construction and trusted beyond it.
struct EDFamily {
    struct Member {
        std::function<Nat(const Nat&)> fn;
        std::string desc;
    };

    std::vector<Member> members;
    std::function<Nat(std::size_t, std::size_t)> cert;

    std::size_t size() const { return members.size(); }
    Nat value(std::size_t j, const Nat& n) const { return members[j].fn(n); }
};

EDFamily empty_family();

// Direct check of every pairwise certificate on [cert(i,j), cert(i,j) + window).
// Throws CertificateError naming the offending pair and position.
void spot_check(const EDFamily& family, unsigned window = 64);

// Deterministic pseudo-random family of affine members n |-> a + b*n with
// a >= 10 (so values clear single-digit transducer outputs and the catching
// hypothesis holds by construction), pairwise distinct, with exact
// certificates: two affine maps agree at most once, and the certificate is
// one past that point. Spot-checked before returning.
EDFamily seeded_affine_family(std::uint64_t seed, unsigned size);

} // namespace medf
