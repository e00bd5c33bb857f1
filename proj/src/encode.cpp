#include "medf/encode.hpp"

#include "medf/errors.hpp"
#include "medf/orders.hpp"
#include "medf/sampling.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace medf {

namespace {

Nat nat_of(std::size_t k) { return Nat(static_cast<unsigned long>(k)); }

} // namespace

Word rule_prefix(const Rule& f, std::size_t len) {
    Word out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) out.push_back(f(nat_of(i)));
    return out;
}

Rule seeded_rule(std::uint64_t seed, std::uint64_t bound) {
    if (bound == 0) throw InputError("seeded_rule: bound must be positive");
    std::uint64_t s0 = splitmix64(seed);
    return [s0, bound](const Nat& n) -> Nat {
        return Nat(static_cast<unsigned long>(splitmix64(s0 + nat_to_u64(n)) % bound));
    };
}

Nat encode_g(const Rule& h, const Rule& z, const Nat& n) {
    if (n % 2 == 0) return h(n / 2);
    if (nat_bits(n) > 32)
        throw InputError("encode_g: odd position " + nat_str(n) +
                         " needs a history too long to materialize");
    std::size_t len = static_cast<std::size_t>(nat_to_u64(n));
    return pair_code(rule_prefix(h, len), rule_prefix(z, len));
}

Word encode_prefix(const Rule& h, const Rule& z, std::size_t len) {
    Word g;
    g.reserve(len);
    Word hv, zv;
    auto ensure = [&](std::size_t k) {
        while (hv.size() < k) {
            Nat idx = nat_of(hv.size());
            hv.push_back(h(idx));
            zv.push_back(z(idx));
        }
    };
    for (std::size_t p = 0; p < len; ++p) {
        if (p % 2 == 0) {
            ensure(p / 2 + 1);
            g.push_back(hv[p / 2]);
        } else {
            ensure(p);
            g.push_back(pair_code(Word(hv.begin(), hv.begin() + p),
                                  Word(zv.begin(), zv.begin() + p)));
        }
    }
    return g;
}

std::vector<std::string> coherence_violations(const Word& gPrefix) {
    std::vector<std::string> out;
    bool more = false;
    auto add = [&out, &more](std::string msg) {
        if (out.size() < 32) out.push_back(std::move(msg));
        else more = true;
    };

    struct Odd {
        std::size_t pos;
        Word c0, c1;
    };
    std::vector<Odd> odds;

    for (std::size_t p = 1; p < gPrefix.size(); p += 2) {
        const Nat& v = gPrefix[p];
        // Check the decoded component length from the shell index alone;
        // a forged value can claim a length far too large to materialize.
        bool len_ok;
        if (v == 0) {
            len_ok = false;
        } else {
            auto [lm1, body] = delta_inv(v - 1);
            len_ok = (lm1 == nat_of(p) - 1);
        }
        if (!len_ok) {
            add("position " + std::to_string(p) +
                ": decoded components do not have length " + std::to_string(p));
            continue;
        }
        auto [c0, c1] = pair_decode(v);
        for (std::size_t k = 0; k < c0.size() && 2 * k < gPrefix.size(); ++k)
            if (gPrefix[2 * k] != c0[k])
                add("position " + std::to_string(p) + ": component 0 entry " +
                    std::to_string(k) + " is " + nat_str(c0[k]) + " but even entry " +
                    std::to_string(2 * k) + " is " + nat_str(gPrefix[2 * k]));
        for (const Odd& q : odds) {
            if (!word_is_prefix(q.c0, c0))
                add("component 0 at position " + std::to_string(q.pos) +
                    " is not a prefix of component 0 at position " + std::to_string(p));
            if (!word_is_prefix(q.c1, c1))
                add("component 1 at position " + std::to_string(q.pos) +
                    " is not a prefix of component 1 at position " + std::to_string(p));
        }
        odds.push_back(Odd{p, std::move(c0), std::move(c1)});
    }
    if (more) out.push_back("...");
    return out;
}

bool coherence_check(const Word& gPrefix) { return coherence_violations(gPrefix).empty(); }

std::pair<Word, Word> decode_g(const Word& gPrefix) {
    if (gPrefix.size() % 2 != 0)
        throw InputError("decode_g: prefix length must be even, got " +
                         std::to_string(gPrefix.size()));
    if (gPrefix.empty()) return {Word{}, Word{}};
    auto bad = coherence_violations(gPrefix);
    if (!bad.empty())
        throw InputError("decode_g: prefix is not a coherent encoding: " + bad.front());
    return pair_decode(gPrefix[gPrefix.size() - 1]);
}

Rule even_restriction(const Rule& f) {
    return [f](const Nat& n) -> Nat { return f(2 * n); };
}

std::vector<Nat> transfer_agreement(const Rule& h, const Rule& z,
                                    const Rule& f, std::size_t horizon) {
    std::vector<Nat> out;
    for (std::size_t pos = 0; pos < horizon; pos += 2) {
        Nat p = nat_of(pos);
        if (encode_g(h, z, p) == f(p)) out.push_back(p);
    }
    return out;
}

} // namespace medf
