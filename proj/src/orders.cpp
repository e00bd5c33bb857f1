#include "medf/orders.hpp"

#include "medf/errors.hpp"

namespace medf {

OrderVerdict lex_compare(const Bits& a, const Bits& b) {
    std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < b[i]) return OrderVerdict::less;
        if (a[i] > b[i]) return OrderVerdict::greater;
    }
    if (a.size() == b.size()) return OrderVerdict::equal;
    // Agreement on the common part: the prefix comes first.
    return a.size() < b.size() ? OrderVerdict::less : OrderVerdict::greater;
}

OrderVerdict maxlex_compare(const Bits& a, const Bits& b) {
    if (a.size() != b.size())
        return a.size() < b.size() ? OrderVerdict::less : OrderVerdict::greater;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return OrderVerdict::less;
        if (a[i] > b[i]) return OrderVerdict::greater;
    }
    return OrderVerdict::equal;
}

Nat delta(const Nat& n, const Nat& k) {
    Nat s = n + k;
    return (s + 1) * s / 2 + n;
}

std::pair<Nat, Nat> delta_inv(const Nat& m) {
    // Largest s with s(s+1)/2 <= m, then n = m - s(s+1)/2 lies on diagonal s.
    Nat t = 8 * m + 1;
    Nat r;
    mpz_sqrt(r.get_mpz_t(), t.get_mpz_t());
    Nat s = (r - 1) / 2;
    Nat tri = s * (s + 1) / 2;
    Nat n = m - tri;
    Nat k = s - n;
    return {n, k};
}

Nat node_index(const Bits& s) {
    // 2^len - 1 strings precede length len; within a length, binary value.
    Nat base = 0;
    mpz_setbit(base.get_mpz_t(), static_cast<mp_bitcnt_t>(s.size()));
    base -= 1;
    Nat val = 0;
    for (auto b : s) {
        val <<= 1;
        if (b) val += 1;
    }
    return base + val;
}

Bits node_unindex(const Nat& m) {
    Nat mp1 = m + 1;
    std::size_t len = nat_bits(mp1) - 1;
    Nat base = 0;
    mpz_setbit(base.get_mpz_t(), static_cast<mp_bitcnt_t>(len));
    base -= 1;
    Nat val = m - base;
    Bits out(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
        // MSB first: bit (len-1-i) of val.
        if (mpz_tstbit(val.get_mpz_t(), static_cast<mp_bitcnt_t>(len - 1 - i))) out[i] = 1;
    }
    return out;
}

Nat seq_code(const Word& w) {
    Nat code = 0;
    for (const Nat& k : w)
        code = cantor_pair(code, k) + 1;
    return code;
}

Word seq_decode(const Nat& m) {
    Word out;
    Nat cur = m;
    while (cur != 0) {
        Nat head, k;
        cantor_unpair(cur - 1, head, k);
        out.insert(out.begin(), k);
        cur = head;
    }
    return out;
}

namespace {

Nat balanced_code(const Word& w, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return w[lo];
    std::size_t mid = lo + (hi - lo + 1) / 2;
    return cantor_pair(balanced_code(w, lo, mid), balanced_code(w, mid, hi));
}

void balanced_decode(const Nat& m, Word& out, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) {
        out[lo] = m;
        return;
    }
    std::size_t mid = lo + (hi - lo + 1) / 2;
    Nat a, b;
    cantor_unpair(m, a, b);
    balanced_decode(a, out, lo, mid);
    balanced_decode(b, out, mid, hi);
}

} // namespace

Nat pair_code(const Word& s0, const Word& s1) {
    if (s0.size() != s1.size())
        throw InputError("pair_code requires equal-length components");
    if (s0.empty()) return 0;
    Word zip(s0.size());
    for (std::size_t i = 0; i < s0.size(); ++i)
        zip[i] = cantor_pair(s0[i], s1[i]);
    Nat body = balanced_code(zip, 0, zip.size());
    return 1 + delta(Nat(zip.size()) - 1, body);
}

std::pair<Word, Word> pair_decode(const Nat& m) {
    if (m == 0) return {Word{}, Word{}};
    auto [lm1, body] = delta_inv(m - 1);
    std::size_t len = nat_to_u64(lm1) + 1;
    Word zip(len);
    balanced_decode(body, zip, 0, len);
    Word s0(len), s1(len);
    for (std::size_t i = 0; i < len; ++i)
        cantor_unpair(zip[i], s0[i], s1[i]);
    return {std::move(s0), std::move(s1)};
}

Word pair_component(const Nat& m, int which) {
    auto [s0, s1] = pair_decode(m);
    return which == 0 ? s0 : s1;
}

} // namespace medf
