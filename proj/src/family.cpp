#include "medf/family.hpp"

#include "medf/errors.hpp"
#include "medf/sampling.hpp"

namespace medf {

EDFamily empty_family() {
    EDFamily fam;
    fam.cert = [](std::size_t, std::size_t) { return Nat(0); };
    return fam;
}

void spot_check(const EDFamily& family, unsigned window) {
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            Nat b = family.cert(i, j);
            for (Nat n = b; n < b + window; ++n)
                if (family.members[i].fn(n) == family.members[j].fn(n))
                    throw CertificateError(
                        "family members " + std::to_string(i) + " (" + family.members[i].desc +
                        ") and " + std::to_string(j) + " (" + family.members[j].desc +
                        ") agree at " + n.get_str() + " despite certificate " + b.get_str());
        }
}

EDFamily seeded_affine_family(std::uint64_t seed, unsigned size) {
    std::uint64_t ctr = seed;
    auto next = [&ctr]() {
        ctr += 0x9E3779B97F4A7C15ull;
        return splitmix64(ctr);
    };

    std::vector<long> as, bs;
    for (unsigned i = 0; i < size; ++i) {
        long a = 10 + static_cast<long>(next() % 30);
        long b = static_cast<long>(next() % 4);
        // Identical (a, b) pairs would never disagree; nudge the offset.
        auto clashes = [&](long aa, long bb) {
            for (unsigned j = 0; j < i; ++j)
                if (as[j] == aa && bs[j] == bb) return true;
            return false;
        };
        while (clashes(a, b)) ++a;
        as.push_back(a);
        bs.push_back(b);
    }

    EDFamily fam;
    for (unsigned i = 0; i < size; ++i) {
        long a = as[i], b = bs[i];
        fam.members.push_back({[a, b](const Nat& n) -> Nat { return Nat(a) + Nat(b) * n; },
                               "affine(" + std::to_string(a) + "," + std::to_string(b) + ")"});
    }
    fam.cert = [as, bs](std::size_t i, std::size_t j) {
        long da = as[j] - as[i], db = bs[i] - bs[j];
        if (db == 0) return Nat(0); // parallel lines, offsets differ
        // One crossing at n = da / db; certified from just past it if it is a
        // nonnegative integer, from 0 otherwise.
        if (da % db != 0) return Nat(0);
        long n = da / db;
        return n >= 0 ? Nat(n + 1) : Nat(0);
    };
    spot_check(fam);
    return fam;
}

} // namespace medf
