#include <doctest.h>

#include "medf/tree.hpp"

#include <thread>

using namespace medf;

namespace {
Bits B(const char* s) { return bits_from_string(s); }
} // namespace

TEST_CASE("full tree skeleton is the identity") {
    auto t = full_tree();
    CHECK(t.skel(B("")) == B(""));
    CHECK(t.skel(B("01")) == B("01"));
    CHECK(contains(t, B("110101")));
}

TEST_CASE("fronts of the full tree") {
    auto t = full_tree();
    CHECK(nth_splitting_front(t, 0) == std::vector<Bits>{B("")});
    CHECK(nth_splitting_front(t, 1) == std::vector<Bits>{B("0"), B("1")});
    auto f2 = nth_splitting_front(t, 2);
    REQUIRE(f2.size() == 4);
    CHECK(f2[0] == B("00"));
    CHECK(f2[3] == B("11"));
    auto s1 = succ_of_nth_front(t, 1);
    REQUIRE(s1.size() == 4);
    CHECK(s1[0] == B("00"));
    CHECK(s1[1] == B("01"));
    CHECK(s1[2] == B("10"));
    CHECK(s1[3] == B("11"));
}

TEST_CASE("restrict moves the root of the skeleton") {
    auto t = restrict(full_tree(), B("1"));
    CHECK(t.skel(B("")) == B("1"));
    CHECK(t.skel(B("0")) == B("10"));
    CHECK(contains(t, B("1")));
    CHECK(contains(t, B("")));   // stem below the new root stays
    CHECK(!contains(t, B("0")));
    CHECK_THROWS_AS(restrict(restrict(full_tree(), B("1")), B("01")), InputError);
}

TEST_CASE("restrict lands on the minimal index on the descent") {
    // Restricting at a non-splitting node of a padded skeleton: the index
    // must be the first one whose node extends the target.
    auto t = restrict(full_tree(), B("10"));
    CHECK(restrict_index(t, B("1")) == B(""));      // already above the root node
    CHECK(restrict_index(t, B("100")) == B("0"));
    CHECK(restrict_index(full_tree(), B("10")) == B("10"));
}

TEST_CASE("pullback composes skeletons") {
    auto outer = restrict(full_tree(), B("1"));
    auto inner = restrict(full_tree(), B("0"));
    auto q = pullback(outer, inner);
    // inner.skel(c) = 0^c, outer.skel(s) = 1^s.
    CHECK(q.skel(B("")) == B("10"));
    CHECK(q.skel(B("1")) == B("101"));
    CHECK(q.skel(B("10")) == B("1010"));
}

TEST_CASE("homeo_prefix inverts the skeleton along a branch") {
    auto t = restrict(full_tree(), B("1"));
    CHECK(homeo_prefix(t, B("1")) == B(""));
    CHECK(homeo_prefix(t, B("10")) == B("0"));
    CHECK(homeo_prefix(t, B("1011")) == B("011"));
    CHECK(homeo_prefix(t, B("")) == B(""));  // stem node below the root split
    CHECK_THROWS_AS(homeo_prefix(t, B("01")), InputError);

    auto s = seeded_skeleton(42, 4);
    for (const Bits& c : {B(""), B("0"), B("11"), B("010")})
        CHECK(homeo_prefix(s, s.skel(c)) == c);
}

TEST_CASE("graft layer reroutes indices below its bases") {
    std::map<Bits, Bits> g;
    g[B("0")] = B("1");
    auto t = graft_layer(full_tree(), 1, g);
    CHECK(t.skel(B("")) == B(""));
    CHECK(t.skel(B("0")) == B("01"));
    CHECK(t.skel(B("00")) == B("010"));
    CHECK(t.skel(B("1")) == B("1")); // unlisted base untouched
}

TEST_CASE("validate accepts lawful skeletons") {
    CHECK(validate(full_tree(), 8).ok);
    CHECK(validate(seeded_skeleton(7, 5), 6).ok);
    CHECK(validate(restrict(seeded_skeleton(7, 5), seeded_skeleton(7, 5).skel(B("01"))), 5).ok);
}

TEST_CASE("validate pins violations on planted defects") {
    // Two equal siblings: lex preservation (and successors) must fire at (0,1).
    auto broken = tree_from_rule([](const Bits& c) {
        if (c.empty()) return Bits{};
        Bits out = {1};
        out.insert(out.end(), c.begin() + 1, c.end());
        return out;
    });
    auto report = validate(broken, 2);
    CHECK(!report.ok);
    bool lex_at_siblings = false;
    for (const auto& v : report.violations)
        if (v.invariant == "lex-preservation" && v.witness.find("(0,1)") != std::string::npos)
            lex_at_siblings = true;
    CHECK(lex_at_siblings);

    // Non-monotone rule: child forgets its parent's prefix.
    auto chopped = tree_from_rule([](const Bits& c) {
        return c.size() < 2 ? c : Bits(c.begin() + 1, c.end());
    });
    auto report2 = validate(chopped, 3);
    CHECK(!report2.ok);
    bool saw_monotone = false;
    for (const auto& v : report2.violations)
        if (v.invariant == "monotone" || v.invariant == "successor") saw_monotone = true;
    CHECK(saw_monotone);
}

TEST_CASE("memoized skeletons answer identically under concurrent queries") {
    auto t = seeded_skeleton(99, 6);
    std::vector<Bits> expected;
    for (unsigned v = 0; v < 32; ++v) {
        Bits c;
        for (unsigned i = 0; i < 5; ++i) c.push_back((v >> i) & 1);
        expected.push_back(t.skel(c));
    }
    auto fresh = seeded_skeleton(99, 6);
    std::vector<std::vector<Bits>> got(4);
    std::vector<std::thread> workers;
    for (int w = 0; w < 4; ++w)
        workers.emplace_back([&, w] {
            for (unsigned v = 0; v < 32; ++v) {
                Bits c;
                for (unsigned i = 0; i < 5; ++i) c.push_back((v >> i) & 1);
                got[w].push_back(fresh.skel(c));
            }
        });
    for (auto& th : workers) th.join();
    for (int w = 0; w < 4; ++w) CHECK(got[w] == expected);
}

TEST_CASE("sampled branches descend the skeleton deterministically") {
    auto t = full_tree();
    Bits a = sampled_branch_prefix(t, 5, 0, 12);
    Bits b = sampled_branch_prefix(t, 5, 0, 12);
    CHECK(a == b);
    CHECK(a.size() >= 12);
    Bits c = sampled_branch_prefix(t, 6, 0, 12);
    CHECK(a != c); // different seed, different path (with overwhelming likelihood)

    auto idx = sampled_branch_indices(5, 0, 12);
    REQUIRE(idx.size() == 13);
    for (std::size_t i = 0; i < 12; ++i) CHECK(is_prefix(idx[i], idx[i + 1]));
    CHECK(is_prefix(idx[12], a)); // full tree: index path = node path
}
