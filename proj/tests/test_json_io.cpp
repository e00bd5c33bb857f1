#include <doctest.h>

#include "medf/errors.hpp"
#include "medf/json_io.hpp"
#include "medf/orders.hpp"

using namespace medf;

TEST_CASE("naturals travel as decimal strings in both directions") {
    Nat big = Nat("123456789012345678901234567890");
    CHECK(nat_to_json(big) == Json("123456789012345678901234567890"));
    CHECK(nat_from_json(nat_to_json(big), "t") == big);
    CHECK(nat_from_json(Json(42), "t") == 42);

    CHECK_THROWS_WITH_AS(nat_from_json(Json("12x"), "t"), doctest::Contains("decimal"),
                         InputError);
    CHECK_THROWS_WITH_AS(nat_from_json(Json(""), "t"), doctest::Contains("decimal"), InputError);
    CHECK_THROWS_WITH_AS(nat_from_json(Json(-3), "t"), doctest::Contains("natural"), InputError);
    CHECK_THROWS_WITH_AS(nat_from_json(Json(1.5), "t"), doctest::Contains("natural"), InputError);

    CHECK(u64_from_json(Json("18446744073709551615"), "t") == 18446744073709551615ULL);
    CHECK_THROWS_WITH_AS(u64_from_json(Json("18446744073709551616"), "t"),
                         doctest::Contains("64 bits"), InputError);
}

TEST_CASE("bit strings and words round-trip") {
    Bits s{1, 0, 0, 1};
    CHECK(bits_to_json(s) == Json("1001"));
    CHECK(bits_from_json(bits_to_json(s), "t") == s);
    CHECK(bits_from_json(Json(""), "t") == Bits{});
    CHECK_THROWS_WITH_AS(bits_from_json(Json("012"), "t"), doctest::Contains("0 and 1"),
                         InputError);

    Word w{Nat(0), Nat(7), Nat("99999999999999999999")};
    CHECK(word_from_json(word_to_json(w), "t") == w);
    CHECK_THROWS_WITH_AS(word_from_json(Json{{"a", 1}}, "t"), doctest::Contains("array"),
                         InputError);
}

TEST_CASE("rule specs evaluate as written") {
    Rule c = rule_from_json(Json{{"kind", "const"}, {"value", "7"}}, "t");
    CHECK(c(Nat(0)) == 7);
    CHECK(c(Nat(100)) == 7);

    Rule a = rule_from_json(Json{{"kind", "affine"}, {"a", "3"}, {"b", "5"}}, "t");
    CHECK(a(Nat(0)) == 3);
    CHECK(a(Nat(4)) == 23);

    Rule cy = rule_from_json(Json{{"kind", "cycle"}, {"values", Json::array({"4", "1", "9"})}}, "t");
    CHECK(cy(Nat(0)) == 4);
    CHECK(cy(Nat(1)) == 1);
    CHECK(cy(Nat(2)) == 9);
    CHECK(cy(Nat(3)) == 4);
    CHECK(cy(Nat(302)) == 9);

    CHECK_THROWS_WITH_AS(rule_from_json(Json{{"kind", "poly"}}, "t"), doctest::Contains("poly"),
                         InputError);
    CHECK_THROWS_WITH_AS(rule_from_json(Json{{"kind", "cycle"}, {"values", Json::array()}}, "t"),
                         doctest::Contains("at least one"), InputError);
    CHECK_THROWS_WITH_AS(rule_from_json(Json{{"kind", "affine"}, {"a", "3"}}, "t"),
                         doctest::Contains("missing key \"b\""), InputError);
}

TEST_CASE("family specs carry max-of-bounds certificates") {
    Json j = Json::array({Json{{"kind", "affine"}, {"a", "10"}, {"b", "2"}, {"certBound", "4"}},
                          Json{{"kind", "affine"}, {"a", "11"}, {"b", "2"}, {"certBound", "0"}},
                          Json{{"kind", "const"}, {"value", "5"}, {"certBound", "9"}}});
    EDFamily fam = family_from_json(j, "t");
    REQUIRE(fam.size() == 3);
    CHECK(fam.value(0, Nat(3)) == 16);
    CHECK(fam.value(1, Nat(3)) == 17);
    CHECK(fam.value(2, Nat(3)) == 5);
    CHECK(fam.cert(0, 1) == 4);
    CHECK(fam.cert(1, 2) == 9);
    CHECK(fam.members[0].desc == "affine 10+2n");
    CHECK(fam.members[2].desc == "const 5");
    spot_check(fam);
}

TEST_CASE("transducer specs parse by state name") {
    Json j{{"states", Json::array({"a", "b"})},
           {"start", "a"},
           {"arity", 1},
           {"trans", Json::array({Json{{"from", "a"}, {"bit", 0}, {"to", "b"}, {"out", Json::array({"0"})}},
                                  Json{{"from", "a"}, {"bit", 1}, {"to", "b"}, {"out", Json::array({"1"})}},
                                  Json{{"from", "b"}, {"bit", 0}, {"to", "a"}, {"out", Json::array({"0", "0"})}},
                                  Json{{"from", "b"}, {"bit", 1}, {"to", "a"}, {"out", Json::array({"1", "1"})}}})}};
    TransducerSpec spec = transducer_from_json(j, "t");
    CHECK(spec.states == std::vector<std::string>{"a", "b"});
    CHECK(spec.start == 0);
    CHECK(spec.arity == 1);
    REQUIRE(spec.arcs.size() == 2);
    CHECK(spec.arcs[0][1].to == 1);
    CHECK(spec.arcs[1][1].out == Word{Nat(1), Nat(1)});

    Json withKind = j;
    withKind["kind"] = "transducer";
    CodePtr code = code_from_json(withKind, "t");
    CHECK(code->apply(Bits{1, 0}) == Word{Nat(1), Nat(0), Nat(0)});

    SUBCASE("unknown state") {
        Json bad = j;
        bad["start"] = "c";
        CHECK_THROWS_WITH_AS(transducer_from_json(bad, "t"), doctest::Contains("unknown state"),
                             InputError);
    }
    SUBCASE("missing arc") {
        Json bad = j;
        bad["trans"].erase(3);
        CHECK_THROWS_WITH_AS(transducer_from_json(bad, "t"),
                             doctest::Contains("no transition from \"b\" on bit 1"), InputError);
    }
    SUBCASE("duplicate arc") {
        Json bad = j;
        bad["trans"].push_back(bad["trans"][0]);
        CHECK_THROWS_WITH_AS(transducer_from_json(bad, "t"), doctest::Contains("duplicate"),
                             InputError);
    }
    SUBCASE("bad bit") {
        Json bad = j;
        bad["trans"][0]["bit"] = 2;
        CHECK_THROWS_WITH_AS(transducer_from_json(bad, "t"), doctest::Contains("0 or 1"),
                             InputError);
    }
}

TEST_CASE("table codes and product codes parse") {
    Json j{{"kind", "table"},
           {"depth", 1},
           {"table", Json::array({Json::array({"", Json::array()}),
                                  Json::array({"0", Json::array({"5"})}),
                                  Json::array({"1", Json::array({"8"})})})},
           {"tail", "repeat-last"}};
    CodePtr code = code_from_json(j, "t");
    CHECK(code->apply(Bits{0}) == Word{Nat(5)});
    CHECK(code->apply(Bits{1, 1}) == Word{Nat(8), Nat(8)});

    Json badTail = j;
    badTail["tail"] = "mirror";
    CHECK_THROWS_WITH_AS(code_from_json(badTail, "t"), doctest::Contains("repeat-last"),
                         InputError);

    ProductCodePtr cp = product_code_from_json(
        Json{{"kind", "const"}, {"out", Json::array({"3", "1"})}}, "t");
    CHECK(cp->arity() == 0);
    CHECK(cp->apply({}) == Word{Nat(3), Nat(1)});

    CHECK_THROWS_WITH_AS(product_code_from_json(Json{{"kind", "spline"}}, "t"),
                         doctest::Contains("spline"), InputError);
}

TEST_CASE("tree specs parse and serialize") {
    SkeletonTree full = tree_from_json(Json{{"kind", "full"}}, "t");
    CHECK(full.skel(Bits{1, 0}) == Bits{1, 0});

    SkeletonTree seeded = tree_from_json(Json{{"kind", "seeded"}, {"seed", 99}, {"maxPad", 3}}, "t");
    SkeletonTree direct = seeded_skeleton(99, 3);
    for (Nat i = 0; i < 15; ++i) CHECK(seeded.skel(node_unindex(i)) == direct.skel(node_unindex(i)));

    Json dump = tree_prefix_json(full, 2);
    CHECK(dump["depth"] == 2);
    REQUIRE(dump["skeleton"].size() == 7);
    CHECK(dump["skeleton"][0] == Json::array({"", ""}));
    CHECK(dump["skeleton"][3] == Json::array({"00", "00"}));

    SkeletonTree table = tree_from_json(
        Json{{"kind", "table"},
             {"depth", 1},
             {"rows", Json::array({Json::array({"", "0"}), Json::array({"0", "00"}),
                                   Json::array({"1", "011"})})}},
        "t");
    CHECK(table.skel(Bits{}) == Bits{0});
    CHECK(table.skel(Bits{1}) == Bits{0, 1, 1});

    CHECK_THROWS_WITH_AS(tree_from_json(Json{{"kind", "bush"}}, "t"), doctest::Contains("bush"),
                         InputError);
}

TEST_CASE("ned instances parse with per-member avoidance bounds") {
    Json j{{"f", Json{{"kind", "affine"}, {"a", "10"}, {"b", "3"}}},
           {"family", Json::array({Json{{"fn", Json{{"kind", "affine"}, {"a", "2"}, {"b", "5"}}},
                                        {"B", "5"}},
                                   Json{{"fn", Json{{"kind", "const"}, {"value", "0"}}},
                                        {"B", "0"}}})},
           {"hStar", Json{{"kind", "affine"}, {"a", "10"}, {"b", "3"}}},
           {"gStar", Json{{"kind", "affine"}, {"a", "6"}, {"b", "2"}}}};
    NedInput in = ned_from_json(j, "t");
    REQUIRE(in.family.size() == 2);
    CHECK(in.avoid_bound == std::vector<Nat>{Nat(5), Nat(0)});
    CHECK(in.f(Nat(2)) == 16);
    CHECK(in.family[0].fn(Nat(2)) == 12);
    CHECK(in.g_star(Nat(1)) == 8);
    // 10+3n = 2+5n exactly at n = 4, so bound 5 is honest.
    spot_check(in);

    CHECK_THROWS_WITH_AS(ned_from_json(Json{{"f", Json{{"kind", "const"}, {"value", "1"}}}}, "t"),
                         doctest::Contains("missing key \"family\""), InputError);
}
