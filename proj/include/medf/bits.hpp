#pragma once

#include "medf/errors.hpp"
#include "medf/nat.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace medf {

// Finite {0,1}-sequence. Nodes of the binary tree, skeleton indices, branch
// prefixes -- everything positional lives here.
using Bits = std::vector<std::uint8_t>;

// Finite sequence over N; output words of codes, function prefixes.
using Word = std::vector<Nat>;

enum class OrderVerdict { less, equal, greater };

inline Bits bits_from_string(const std::string& s) {
    Bits out;
    out.reserve(s.size());
    for (char ch : s) {
        if (ch == '0') out.push_back(0);
        else if (ch == '1') out.push_back(1);
        else throw InputError("bit string must contain only 0/1, got '" + s + "'");
    }
    return out;
}

inline std::string bits_to_string(const Bits& b) {
    std::string out;
    out.reserve(b.size());
    for (auto x : b) out.push_back(x ? '1' : '0');
    return out;
}

inline bool is_prefix(const Bits& a, const Bits& b) {
    if (a.size() > b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

inline bool is_proper_prefix(const Bits& a, const Bits& b) {
    return a.size() < b.size() && is_prefix(a, b);
}

inline bool comparable(const Bits& a, const Bits& b) {
    return is_prefix(a, b) || is_prefix(b, a);
}

inline Bits concat(const Bits& a, const Bits& b) {
    Bits out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline Bits append(const Bits& a, std::uint8_t bit) {
    Bits out = a;
    out.push_back(bit);
    return out;
}

inline bool word_is_prefix(const Word& a, const Word& b) {
    if (a.size() > b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

// Lexicographic order with proper prefixes ordered before their extensions.
OrderVerdict lex_compare(const Bits& a, const Bits& b);

// Length-first order: shorter sequences come first, ties broken
// lexicographically. Order-isomorphic to the node numbering.
OrderVerdict maxlex_compare(const Bits& a, const Bits& b);

inline bool lex_less(const Bits& a, const Bits& b) {
    return lex_compare(a, b) == OrderVerdict::less;
}

inline bool maxlex_less(const Bits& a, const Bits& b) {
    return maxlex_compare(a, b) == OrderVerdict::less;
}

} // namespace medf
