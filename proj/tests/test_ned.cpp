#include <doctest.h>

#include "medf/encode.hpp"
#include "medf/errors.hpp"
#include "medf/ned.hpp"

#include <algorithm>

using namespace medf;

namespace {

Rule const_rule(unsigned long v) {
    return [v](const Nat&) -> Nat { return Nat(v); };
}

EDFamily::Member mem(Rule fn, std::string desc) {
    return EDFamily::Member{std::move(fn), std::move(desc)};
}

// f(n) = n+1 against a single member that shadows it below 5 and then
// drops to 0; the least position from which f avoids the member is 5.
NedInput cutover_instance() {
    NedInput in;
    in.f = [](const Nat& n) -> Nat { return Nat(n + 1); };
    in.family.push_back(
        mem([](const Nat& n) -> Nat { return n < 5 ? Nat(n + 1) : Nat(0); }, "shadow below 5"));
    in.avoid_bound = {Nat(5)};
    in.h_star = const_rule(0);
    in.g_star = [](const Nat& k) -> Nat { return Nat(5 + 2 * k); };
    return in;
}

// Seeded three-member instance: member 0 shadows f below 7, members 1 and 2
// are offsets that never meet f. h_star meets f exactly at even positions.
NedInput seeded_instance() {
    NedInput in;
    Rule f = seeded_rule(101, 100);
    in.f = f;
    in.family.push_back(
        mem([f](const Nat& n) -> Nat { return n < 7 ? f(n) : Nat(f(n) + 3); }, "shadow below 7"));
    in.family.push_back(mem([f](const Nat& n) -> Nat { return Nat(f(n) + 1); }, "f plus one"));
    in.family.push_back(mem([f](const Nat& n) -> Nat { return Nat(f(n) + 2); }, "f plus two"));
    in.avoid_bound = {Nat(7), Nat(0), Nat(0)};
    in.h_star = [f](const Nat& n) -> Nat { return n % 2 == 0 ? f(n) : Nat(f(n) + 1); };
    in.g_star = [](const Nat& k) -> Nat { return Nat(7 + 2 * k); };
    return in;
}

} // namespace

TEST_CASE("the m sequence starts where direct collisions stop") {
    NedInput in;
    in.h_star = const_rule(0);
    in.g_star = [](const Nat& k) -> Nat { return Nat(k); };

    SUBCASE("never-colliding member") {
        in.f = const_rule(1);
        in.family.push_back(mem(const_rule(0), "zero"));
        in.avoid_bound = {Nat(0)};
        CHECK(compute_m_seq(in, 0) == std::vector<Nat>{Nat(0)});
    }

    SUBCASE("successor against identity") {
        in.f = [](const Nat& n) -> Nat { return Nat(n + 1); };
        in.family.push_back(mem([](const Nat& n) -> Nat { return n; }, "identity"));
        in.avoid_bound = {Nat(0)};
        CHECK(compute_m_seq(in, 0) == std::vector<Nat>{Nat(0)});
    }

    SUBCASE("collisions below the bound push the start") {
        NedInput cut = cutover_instance();
        CHECK(compute_m_seq(cut, 0) == std::vector<Nat>{Nat(5)});
    }

    SUBCASE("freshness forces a new position for identical data") {
        NedInput cut = cutover_instance();
        cut.family.push_back(cut.family[0]);
        cut.avoid_bound.push_back(Nat(5));
        CHECK(compute_m_seq(cut, 1) == std::vector<Nat>{Nat(5), Nat(6)});
    }
}

TEST_CASE("the m sequence accumulates members in order") {
    NedInput in = seeded_instance();
    CHECK(compute_m_seq(in, 2) == std::vector<Nat>{Nat(7), Nat(8), Nat(9)});
}

TEST_CASE("certificate lies are rejected at spot check") {
    NedInput in;
    in.f = const_rule(3);
    in.family.push_back(mem(const_rule(3), "same as f"));
    in.avoid_bound = {Nat(0)};
    in.h_star = const_rule(0);
    in.g_star = [](const Nat& k) -> Nat { return Nat(k); };
    CHECK_THROWS_WITH_AS(spot_check(in), doctest::Contains("fails at 0"), CertificateError);
    CHECK_THROWS_WITH_AS(compute_m_seq(in, 0), doctest::Contains("fails at 0"), CertificateError);
}

TEST_CASE("malformed instances are input errors") {
    NedInput in = cutover_instance();

    SUBCASE("bound list length") {
        in.avoid_bound.push_back(Nat(0));
        CHECK_THROWS_WITH_AS(compute_m_seq(in, 0), doctest::Contains("bounds"), InputError);
    }
    SUBCASE("index past the family") {
        CHECK_THROWS_WITH_AS(compute_m_seq(in, 1), doctest::Contains("outside"), InputError);
    }
    SUBCASE("unset rule") {
        in.f = Rule{};
        CHECK_THROWS_WITH_AS(compute_m_seq(in, 0), doctest::Contains("must all be set"),
                             InputError);
    }
    SUBCASE("absurd bound") {
        in.avoid_bound[0] = Nat(Nat(1) << 40);
        CHECK_THROWS_WITH_AS(compute_m_seq(in, 0), doctest::Contains("too large"), InputError);
    }
}

TEST_CASE("forced replacement takes the least free value") {
    NedInput in;
    in.f = const_rule(5);
    in.family.push_back(mem(const_rule(0), "zero"));
    in.avoid_bound = {Nat(0)};
    in.h_star = const_rule(0);
    in.g_star = [](const Nat& k) -> Nat { return Nat(k); };

    Rule h = build_h(in, 100);
    for (unsigned long n = 0; n < 20; ++n) CHECK(h(Nat(n)) == 1);
    NedReport rep = verify_ned(h, in, 100);
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
}

TEST_CASE("the pipeline preserves agreements and avoids the family") {
    NedInput in = seeded_instance();
    Rule h = build_h(in, 1000);

    // Below m_0 = 7 the even positions have h_star = f = family[0], so the
    // construction must leave f there; verify knows not to complain.
    for (unsigned long n = 0; n < 7; n += 2) CHECK(h(Nat(n)) != in.f(Nat(n)));

    // Block 0 keeps the odd offset value, block >= 1 forces it to 0.
    CHECK(h(Nat(7)) == Nat(in.f(Nat(7)) + 1));
    CHECK(h(Nat(9)) == 0);
    for (unsigned long n = 11; n < 31; n += 2) CHECK(h(Nat(n)) == 0);

    // Every surviving agreement point of h_star carries over to h.
    for (unsigned long n = 8; n < 1000; n += 2) CHECK(h(Nat(n)) == in.f(Nat(n)));

    NedReport rep = verify_ned(h, in, 1000);
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
}

TEST_CASE("verify catches planted defects") {
    NedInput in = seeded_instance();
    Rule h = build_h(in, 1000);

    SUBCASE("agreement defect") {
        Rule bad = [h](const Nat& n) -> Nat { return n == 10 ? Nat(h(n) + 1) : h(n); };
        NedReport rep = verify_ned(bad, in, 100);
        REQUIRE_FALSE(rep.ok);
        CHECK(std::any_of(rep.violations.begin(), rep.violations.end(),
                          [](const NedViolation& v) {
                              return v.check == "agreement" &&
                                     v.witness.find("at 10") != std::string::npos;
                          }));
    }

    SUBCASE("avoidance defect") {
        NedInput in2 = in;
        Rule f0 = in.family[0].fn;
        Rule bad = [h, f0](const Nat& n) -> Nat { return n == 9 ? f0(n) : h(n); };
        NedReport rep = verify_ned(bad, in2, 100);
        REQUIRE_FALSE(rep.ok);
        CHECK(std::any_of(rep.violations.begin(), rep.violations.end(),
                          [](const NedViolation& v) {
                              return v.check == "avoidance" &&
                                     v.witness.find("member 0") != std::string::npos;
                          }));
    }
}

TEST_CASE("missing domination is a loud failure") {
    NedInput in = cutover_instance();
    in.g_star = [](const Nat& k) -> Nat { return Nat(3 + 5 * k); };
    CHECK_THROWS_WITH_AS(build_h(in, 100), doctest::Contains("below m_0"), DominationError);
}

TEST_CASE("the block schedule must strictly increase") {
    NedInput in = cutover_instance();
    in.family.push_back(in.family[0]);
    in.avoid_bound.push_back(Nat(5));
    in.g_star = const_rule(5);
    CHECK_THROWS_WITH_AS(build_h(in, 100), doctest::Contains("strictly increasing"), InputError);
}

TEST_CASE("an empty family passes h_star through") {
    NedInput in;
    Rule f = seeded_rule(7, 50);
    in.f = f;
    in.h_star = f;
    in.g_star = [](const Nat& k) -> Nat { return Nat(k); };

    Rule h = build_h(in, 100);
    for (unsigned long n = 0; n < 20; ++n) CHECK(h(Nat(n)) == f(Nat(n)));
    CHECK(verify_ned(h, in, 100).ok);

    Rule bad = [f](const Nat& n) -> Nat { return Nat(f(n) + 1); };
    NedReport rep = verify_ned(bad, in, 100);
    CHECK_FALSE(rep.ok);
    REQUIRE_FALSE(rep.violations.empty());
    CHECK(rep.violations[0].check == "agreement");
}

TEST_CASE("block indexing follows the schedule") {
    NedInput in = seeded_instance();
    CHECK(ned_block(in, Nat(0), 3) == 0);
    CHECK(ned_block(in, Nat(6), 3) == 0);
    CHECK(ned_block(in, Nat(7), 3) == 0);
    CHECK(ned_block(in, Nat(8), 3) == 0);
    CHECK(ned_block(in, Nat(9), 3) == 1);
    CHECK(ned_block(in, Nat(10), 3) == 1);
    CHECK(ned_block(in, Nat(11), 3) == 2);
    CHECK(ned_block(in, Nat(1000), 3) == 2);
    CHECK(ned_block(in, Nat(1000), 2) == 1);
}
