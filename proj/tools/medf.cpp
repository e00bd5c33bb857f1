// Command-line driver: parse instance files, run the constructions, and
// emit JSON verification reports. Every run is deterministic: the only
// randomness is the explicit seed, reports carry no timestamps, and re-
// running with the same inputs reproduces the bytes.
//
// Exit codes: 0 all checks pass, 1 verification failure (report written),
// 2 input or schema error, 3 search cap exhausted.

#include "medf/catching.hpp"
#include "medf/encode.hpp"
#include "medf/errors.hpp"
#include "medf/family.hpp"
#include "medf/json_io.hpp"
#include "medf/ned.hpp"
#include "medf/orders.hpp"
#include "medf/product.hpp"
#include "medf/tree.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace {

using medf::Json;
using medf::Nat;

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw medf::InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw medf::InputError(path + ": " + e.what());
    }
}

void write_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw medf::InputError("cannot write " + path);
    out << j.dump(2) << "\n";
}

// Accumulates check rows and renders the report: JSON to --out or stdout,
// a one-line-per-check summary to stderr.
struct Report {
    std::string command;
    Json params = Json::object();
    Json checks = Json::array();
    bool ok = true;

    void add(const std::string& name, bool pass, const std::string& witness = "") {
        Json row{{"name", name}, {"status", pass ? "pass" : "fail"}};
        if (!witness.empty()) row["witness"] = witness;
        checks.push_back(std::move(row));
        ok = ok && pass;
    }

    int emit(const std::string& out_path) const {
        std::size_t passed = 0;
        for (const auto& row : checks)
            if (row.at("status") == "pass") ++passed;
        Json j{{"command", command},
               {"params", params},
               {"checks", checks},
               {"summary",
                std::to_string(passed) + "/" + std::to_string(checks.size()) + " checks passed"}};
        if (out_path.empty())
            std::cout << j.dump(2) << "\n";
        else
            write_json(j, out_path);
        for (const auto& row : checks) {
            std::cerr << (row.at("status") == "pass" ? "[pass] " : "[FAIL] ")
                      << row.at("name").get<std::string>();
            if (row.contains("witness")) std::cerr << ": " << row.at("witness").get<std::string>();
            std::cerr << "\n";
        }
        std::cerr << command << ": " << j.at("summary").get<std::string>() << "\n";
        return ok ? 0 : 1;
    }
};

using Violations = std::vector<std::pair<std::string, std::string>>;

// One row per expected check name, failing rows carrying their witnesses.
// Violations under an unexpected name still fail the report rather than
// vanishing.
void fold_checks(Report& rep, const std::vector<std::string>& names, const Violations& violations) {
    for (const auto& name : names) {
        bool any = false;
        for (const auto& v : violations)
            if (v.first == name) {
                rep.add(name, false, v.second);
                any = true;
            }
        if (!any) rep.add(name, true);
    }
    for (const auto& v : violations) {
        bool known = false;
        for (const auto& name : names) known = known || name == v.first;
        if (!known) rep.add(v.first, false, v.second);
    }
}

Violations tree_violations(const medf::TreeReport& r) {
    Violations out;
    for (const auto& v : r.violations) out.emplace_back(v.invariant, v.witness);
    return out;
}

Violations code_violations(const medf::CodeReport& r) {
    Violations out;
    for (const auto& v : r.violations) out.emplace_back(v.kind, v.witness);
    return out;
}

Violations catch_violations(const medf::CatchReport& r) {
    Violations out;
    for (const auto& v : r.violations) out.emplace_back(v.check, v.witness);
    return out;
}

Violations ned_violations(const medf::NedReport& r) {
    Violations out;
    for (const auto& v : r.violations) out.emplace_back(v.check, v.witness);
    return out;
}

int run_orders(std::uint64_t max, std::uint64_t ed_horizon, const std::string& out) {
    Report rep;
    rep.command = "orders-selftest";
    rep.params = Json{{"max", max}, {"edHorizon", ed_horizon}};

    std::string bad;
    for (std::uint64_t m = 0; m <= max && bad.empty(); ++m) {
        auto [n, k] = medf::delta_inv(Nat(m));
        if (medf::delta(n, k) != Nat(m))
            bad = "delta(delta_inv(" + std::to_string(m) + ")) != " + std::to_string(m);
    }
    rep.add("delta-roundtrip", bad.empty(), bad);

    bad.clear();
    for (std::uint64_t m = 0; m <= ed_horizon && bad.empty(); ++m) {
        auto [n, k] = medf::delta_inv(Nat(m));
        (void)k;
        if (n > Nat(m))
            bad = "delta_inv(" + std::to_string(m) + ") has first component " + medf::nat_str(n);
    }
    rep.add("delta-dominates-first", bad.empty(), bad);

    bad.clear();
    for (std::uint64_t m = 0; m <= max && bad.empty(); ++m)
        if (medf::node_index(medf::node_unindex(Nat(m))) != Nat(m))
            bad = "node_index(node_unindex(" + std::to_string(m) + ")) != " + std::to_string(m);
    rep.add("node-index-roundtrip", bad.empty(), bad);

    bad.clear();
    for (std::uint64_t m = 0; m <= max && bad.empty(); ++m)
        if (medf::seq_code(medf::seq_decode(Nat(m))) != Nat(m))
            bad = "seq_code(seq_decode(" + std::to_string(m) + ")) != " + std::to_string(m);
    rep.add("seq-code-roundtrip", bad.empty(), bad);

    bad.clear();
    for (std::uint64_t m = 0; m <= max && bad.empty(); ++m) {
        auto [s0, s1] = medf::pair_decode(Nat(m));
        if (s0.size() != s1.size())
            bad = "pair_decode(" + std::to_string(m) + ") components differ in length";
        else if (medf::pair_code(s0, s1) != Nat(m))
            bad = "pair_code(pair_decode(" + std::to_string(m) + ")) != " + std::to_string(m);
    }
    rep.add("pair-code-roundtrip", bad.empty(), bad);

    return rep.emit(out);
}

int run_validate_tree(const std::string& tree_path, unsigned depth, const std::string& dump,
                      const std::string& out) {
    Report rep;
    rep.command = "validate-tree";
    rep.params = Json{{"tree", tree_path}, {"depth", depth}};
    medf::SkeletonTree tree = medf::tree_from_json(load_json(tree_path), tree_path);
    medf::TreeReport r = medf::validate(tree, depth);
    fold_checks(rep, {"monotone", "successor", "lex-preservation", "front"}, tree_violations(r));
    if (!dump.empty()) write_json(medf::tree_prefix_json(tree, depth), dump);
    return rep.emit(out);
}

int run_validate_code(const std::string& code_path, unsigned depth, const std::string& out) {
    Report rep;
    rep.command = "validate-code";
    rep.params = Json{{"code", code_path}, {"depth", depth}};
    Json j = load_json(code_path);
    std::string kind = j.is_object() && j.contains("kind") && j.at("kind").is_string()
                           ? j.at("kind").get<std::string>()
                           : "";
    medf::CodeReport r;
    if (kind == "const") {
        auto f = medf::product_code_from_json(j, code_path);
        r = medf::validate_product_code(*f, depth);
    } else if (kind == "transducer") {
        medf::TransducerSpec spec = medf::transducer_from_json(j, code_path);
        if (spec.arity == 1) {
            auto f = medf::transducer_code(spec);
            r = medf::validate_code(*f, depth, &spec);
        } else {
            auto f = medf::transducer_product_code(spec);
            r = medf::validate_product_code(*f, depth);
        }
    } else {
        auto f = medf::code_from_json(j, code_path);
        r = medf::validate_code(*f, depth);
    }
    fold_checks(rep, {"monotone", "modulus", "cycle-emission"}, code_violations(r));
    return rep.emit(out);
}

int run_catch_single(const std::string& code_path, const std::string& tree_path, unsigned depth,
                     unsigned branches, std::uint64_t seed, const std::string& trace,
                     const std::string& out) {
    Report rep;
    rep.command = "catch-single";
    rep.params = Json{{"code", code_path},
                      {"tree", tree_path.empty() ? "full" : tree_path},
                      {"depth", depth},
                      {"branches", branches},
                      {"seed", seed}};
    medf::CodePtr f = medf::code_from_json(load_json(code_path), code_path);
    medf::SkeletonTree p =
        tree_path.empty() ? medf::full_tree() : medf::tree_from_json(load_json(tree_path), tree_path);

    medf::CatchResult result = medf::catch_single(p, f);
    medf::CatchReport r = medf::verify_catch(result, p, *f, depth);
    fold_checks(rep, {"membership", "splitting", "successor", "domain", "agreement", "trace"},
                catch_violations(r));

    std::string bad;
    for (std::uint64_t b = 0; b < branches && bad.empty(); ++b) {
        try {
            auto points = medf::branch_agreements(result, *f, seed, b, depth);
            if (points.size() != depth + std::size_t(1))
                bad = "branch " + std::to_string(b) + " yielded " +
                      std::to_string(points.size()) + " agreement points, expected " +
                      std::to_string(depth + 1);
        } catch (const medf::CertificateError& e) {
            bad = std::string("branch ") + std::to_string(b) + ": " + e.what();
        }
    }
    rep.add("branch-agreement", bad.empty(), bad);

    if (!trace.empty()) write_json(medf::catch_trace_json(result, depth), trace);
    return rep.emit(out);
}

int run_catch_product(const std::string& manifest_path, unsigned branches, unsigned horizon,
                      const std::string& result_path, const std::string& out) {
    Report rep;
    rep.command = "catch-product";
    Json m = load_json(manifest_path);
    if (!m.is_object()) throw medf::InputError(manifest_path + ": expected an object");
    if (!m.contains("arity") || !m.contains("code"))
        throw medf::InputError(manifest_path + ": needs keys \"arity\" and \"code\"");
    auto arity = static_cast<unsigned>(medf::u64_from_json(m.at("arity"), "arity"));
    auto depth = static_cast<unsigned>(
        m.contains("depth") ? medf::u64_from_json(m.at("depth"), "depth") : 4);
    auto cap = static_cast<unsigned>(
        m.contains("searchCap") ? medf::u64_from_json(m.at("searchCap"), "searchCap") : 4096);
    std::uint64_t seed = m.contains("seed") ? medf::u64_from_json(m.at("seed"), "seed") : 0;
    rep.params = Json{{"manifest", manifest_path}, {"arity", arity},      {"depth", depth},
                      {"searchCap", cap},          {"branches", branches}, {"horizon", horizon},
                      {"seed", seed}};

    medf::ProductCodePtr f = medf::product_code_from_json(m.at("code"), "code");
    medf::EDFamily family = m.contains("family") ? medf::family_from_json(m.at("family"), "family")
                                                 : medf::empty_family();
    medf::spot_check(family);

    medf::ProductCatchResult result = medf::catch_product(arity, f, family, cap, depth);
    medf::CatchReport r =
        medf::verify_product_catch(result, arity, *f, family, depth, branches, seed, horizon);
    fold_checks(rep,
                {"agreement", "freshness", "d-injective", "avoidance", "branch-cover",
                 "branch-agreement"},
                catch_violations(r));

    if (!result_path.empty()) {
        Json rj = medf::product_result_json(result);
        rj["verification"] = rep.checks;
        write_json(rj, result_path);
    }
    return rep.emit(out);
}

int run_greedy(const std::string& manifest_path, unsigned branches, unsigned horizon,
               const std::string& result_path, const std::string& out) {
    Report rep;
    rep.command = "greedy";
    Json m = load_json(manifest_path);
    if (!m.is_object() || !m.contains("codes") || !m.at("codes").is_array() ||
        m.at("codes").empty())
        throw medf::InputError(manifest_path + ": needs a nonempty \"codes\" array");
    auto depth = static_cast<unsigned>(
        m.contains("depth") ? medf::u64_from_json(m.at("depth"), "depth") : 4);
    auto cap = static_cast<unsigned>(
        m.contains("searchCap") ? medf::u64_from_json(m.at("searchCap"), "searchCap") : 4096);
    std::uint64_t seed = m.contains("seed") ? medf::u64_from_json(m.at("seed"), "seed") : 0;
    rep.params = Json{{"manifest", manifest_path}, {"stages", m.at("codes").size()},
                      {"depth", depth},            {"searchCap", cap},
                      {"branches", branches},      {"horizon", horizon},
                      {"seed", seed}};

    std::vector<medf::ProductCodePtr> codes;
    for (std::size_t k = 0; k < m.at("codes").size(); ++k)
        codes.push_back(
            medf::product_code_from_json(m.at("codes")[k], "codes[" + std::to_string(k) + "]"));
    medf::EDFamily seed_family = m.contains("family")
                                     ? medf::family_from_json(m.at("family"), "family")
                                     : medf::empty_family();
    medf::spot_check(seed_family);

    std::vector<medf::GreedyStage> stages = medf::greedy_med_stage(codes, seed_family, cap, depth);

    std::string bad;
    for (std::size_t xi = 0; xi < stages.size() && bad.empty(); ++xi)
        for (std::size_t eta = xi + 1; eta < stages.size() && bad.empty(); ++eta)
            for (std::uint64_t n = eta; n < horizon; ++n) {
                Nat a = stages[xi].h(Nat(n));
                if (a == stages[eta].h(Nat(n))) {
                    bad = "h_" + std::to_string(xi) + "(" + std::to_string(n) + ") = h_" +
                          std::to_string(eta) + "(" + std::to_string(n) + ") = " +
                          medf::nat_str(a);
                    break;
                }
            }
    rep.add("pairwise-disagreement", bad.empty(), bad);

    std::vector<std::function<Nat(const Nat&)>> done;
    for (std::size_t k = 0; k < stages.size(); ++k) {
        medf::EDFamily fam = medf::greedy_stage_family(done, seed_family);
        medf::CatchReport r = medf::verify_product_catch(
            stages[k].result, codes[k]->arity(), *codes[k], fam, depth, branches, seed, horizon);
        std::string witness;
        if (!r.ok) witness = r.violations.front().check + ": " + r.violations.front().witness;
        rep.add("stage-" + std::to_string(k) + "-verification", r.ok, witness);
        done.push_back(stages[k].h);
    }

    if (!result_path.empty()) {
        Json sj = Json::array();
        for (const auto& stage : stages) sj.push_back(medf::product_result_json(stage.result));
        write_json(Json{{"stages", sj}}, result_path);
    }
    return rep.emit(out);
}

int run_encode(const std::string& h_path, const std::string& z_path, std::uint64_t length,
               const std::string& prefix_path, const std::string& out) {
    Report rep;
    rep.command = "encode";
    rep.params = Json{{"h", h_path}, {"z", z_path}, {"length", length}};
    medf::Rule h = medf::rule_from_json(load_json(h_path), h_path);
    medf::Rule z = medf::rule_from_json(load_json(z_path), z_path);

    medf::Word g = medf::encode_prefix(h, z, length);
    auto bad = medf::coherence_violations(g);
    rep.add("coherence", bad.empty(), bad.empty() ? "" : bad.front());

    std::string witness;
    std::size_t even = static_cast<std::size_t>(length) - static_cast<std::size_t>(length % 2);
    if (even > 0 && bad.empty()) {
        medf::Word head(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(even));
        auto [h0, z0] = medf::decode_g(head);
        if (h0 != medf::rule_prefix(h, even - 1) || z0 != medf::rule_prefix(z, even - 1))
            witness = "decode of the length-" + std::to_string(even) +
                      " prefix does not reproduce the component prefixes";
    }
    rep.add("round-trip", witness.empty(), witness);

    if (!prefix_path.empty()) write_json(Json{{"g", medf::word_to_json(g)}}, prefix_path);
    return rep.emit(out);
}

int run_decode(const std::string& prefix_path, const std::string& components_path,
               const std::string& out) {
    Report rep;
    rep.command = "decode";
    rep.params = Json{{"prefix", prefix_path}};
    Json j = load_json(prefix_path);
    medf::Word g = j.is_array() ? medf::word_from_json(j, prefix_path)
                                : medf::word_from_json(
                                      j.is_object() && j.contains("g") ? j.at("g") : Json(),
                                      prefix_path + ": key \"g\"");
    if (g.size() % 2 != 0)
        throw medf::InputError(prefix_path + ": decodable prefixes have even length, got " +
                               std::to_string(g.size()));

    auto bad = medf::coherence_violations(g);
    if (!bad.empty()) {
        for (const auto& msg : bad) rep.add("coherence", false, msg);
        return rep.emit(out);
    }
    rep.add("coherence", true);

    auto [h, z] = medf::decode_g(g);
    rep.add("decode", true,
            "recovered component prefixes of length " + std::to_string(h.size()));
    if (!components_path.empty())
        write_json(Json{{"h", medf::word_to_json(h)}, {"z", medf::word_to_json(z)}},
                   components_path);
    return rep.emit(out);
}

int run_ned(const std::string& instance_path, std::uint64_t horizon,
            const std::string& result_path, const std::string& out) {
    Report rep;
    rep.command = "ned";
    rep.params = Json{{"instance", instance_path}, {"horizon", horizon}};
    medf::NedInput input = medf::ned_from_json(load_json(instance_path), instance_path);

    medf::Rule h;
    try {
        h = medf::build_h(input, static_cast<std::size_t>(horizon));
    } catch (const medf::DominationError& e) {
        rep.add("domination", false, e.what());
        return rep.emit(out);
    }
    rep.add("domination", true);

    medf::NedReport r = medf::verify_ned(h, input, static_cast<std::size_t>(horizon));
    fold_checks(rep, {"agreement", "avoidance"}, ned_violations(r));

    if (!result_path.empty()) {
        Json hj = Json::array();
        Json nj = Json::array();
        for (std::uint64_t n = 0; n < horizon; ++n) {
            Nat hv = h(Nat(n));
            hj.push_back(medf::nat_to_json(hv));
            if (hv == input.f(Nat(n))) nj.push_back(n);
        }
        write_json(Json{{"h", hj}, {"N", nj}, {"report", rep.checks}}, result_path);
    }
    return rep.emit(out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite catching constructions over perfect binary trees"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out;
    app.add_option("--out", out, "write the JSON report here instead of stdout")
        ->capture_default_str();

    auto* sc_orders = app.add_subcommand("orders-selftest", "round-trip the coding bijections");
    std::uint64_t orders_max = 10000, orders_ed = 100;
    sc_orders->add_option("--max", orders_max, "largest code value to round-trip")
        ->capture_default_str();
    sc_orders->add_option("--ed-horizon", orders_ed, "domination check horizon")
        ->capture_default_str();

    auto* sc_vtree = app.add_subcommand("validate-tree", "check skeleton invariants");
    std::string vtree_path, vtree_dump;
    unsigned vtree_depth = 6;
    sc_vtree->add_option("--tree", vtree_path, "tree JSON file")->required();
    sc_vtree->add_option("--depth", vtree_depth, "index length bound")->capture_default_str();
    sc_vtree->add_option("--dump", vtree_dump, "write the skeleton prefix here");

    auto* sc_vcode = app.add_subcommand("validate-code", "check code monotonicity and modulus");
    std::string vcode_path;
    unsigned vcode_depth = 5;
    sc_vcode->add_option("--code", vcode_path, "code JSON file")->required();
    sc_vcode->add_option("--depth", vcode_depth, "input length bound")->capture_default_str();

    auto* sc_catch = app.add_subcommand("catch-single", "run the single-tree catching construction");
    std::string catch_code, catch_tree, catch_trace;
    unsigned catch_depth = 6, catch_branches = 5;
    std::uint64_t catch_seed = 0;
    sc_catch->add_option("--code", catch_code, "code JSON file")->required();
    sc_catch->add_option("--tree", catch_tree, "tree JSON file (defaults to the full tree)");
    sc_catch->add_option("--depth", catch_depth, "verification depth")->capture_default_str();
    sc_catch->add_option("--branches", catch_branches, "sampled branches")->capture_default_str();
    sc_catch->add_option("--seed", catch_seed, "branch sampling seed")->capture_default_str();
    sc_catch->add_option("--trace", catch_trace, "write the catching trace here");

    auto* sc_prod = app.add_subcommand("catch-product", "run the product fusion construction");
    std::string prod_manifest, prod_result;
    unsigned prod_branches = 3, prod_horizon = 1000;
    sc_prod->add_option("--manifest", prod_manifest, "manifest JSON file")->required();
    sc_prod->add_option("--branches", prod_branches, "sampled branch tuples")
        ->capture_default_str();
    sc_prod->add_option("--horizon", prod_horizon, "avoidance check horizon")
        ->capture_default_str();
    sc_prod->add_option("--result", prod_result, "write h0 and the front traces here");

    auto* sc_greedy = app.add_subcommand("greedy", "run the staged greedy construction");
    std::string greedy_manifest, greedy_result;
    unsigned greedy_branches = 3, greedy_horizon = 1000;
    sc_greedy->add_option("--manifest", greedy_manifest, "manifest JSON file")->required();
    sc_greedy->add_option("--branches", greedy_branches, "sampled branch tuples per stage")
        ->capture_default_str();
    sc_greedy->add_option("--horizon", greedy_horizon, "disagreement check horizon")
        ->capture_default_str();
    sc_greedy->add_option("--result", greedy_result, "write per-stage results here");

    auto* sc_encode = app.add_subcommand("encode", "interleave two rules into one history");
    std::string encode_h, encode_z, encode_prefix_path;
    std::uint64_t encode_length = 100;
    sc_encode->add_option("--h-rule", encode_h, "first rule JSON file")->required();
    sc_encode->add_option("--z-rule", encode_z, "second rule JSON file")->required();
    sc_encode->add_option("--length", encode_length, "prefix length to emit")
        ->capture_default_str();
    sc_encode->add_option("--prefix", encode_prefix_path, "write the encoded prefix here");

    auto* sc_decode = app.add_subcommand("decode", "recover components from an encoded prefix");
    std::string decode_prefix, decode_components;
    sc_decode->add_option("--prefix", decode_prefix, "encoded prefix JSON file")->required();
    sc_decode->add_option("--components", decode_components, "write the recovered components here");

    auto* sc_ned = app.add_subcommand("ned", "agreement-preserving avoidance construction");
    std::string ned_instance, ned_result;
    std::uint64_t ned_horizon = 1000;
    sc_ned->add_option("--instance", ned_instance, "instance JSON file")->required();
    sc_ned->add_option("--horizon", ned_horizon, "verification horizon")->capture_default_str();
    sc_ned->add_option("--result", ned_result, "write h, N and the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*sc_orders) return run_orders(orders_max, orders_ed, out);
        if (*sc_vtree) return run_validate_tree(vtree_path, vtree_depth, vtree_dump, out);
        if (*sc_vcode) return run_validate_code(vcode_path, vcode_depth, out);
        if (*sc_catch)
            return run_catch_single(catch_code, catch_tree, catch_depth, catch_branches,
                                    catch_seed, catch_trace, out);
        if (*sc_prod)
            return run_catch_product(prod_manifest, prod_branches, prod_horizon, prod_result, out);
        if (*sc_greedy)
            return run_greedy(greedy_manifest, greedy_branches, greedy_horizon, greedy_result, out);
        if (*sc_encode)
            return run_encode(encode_h, encode_z, encode_length, encode_prefix_path, out);
        if (*sc_decode) return run_decode(decode_prefix, decode_components, out);
        if (*sc_ned) return run_ned(ned_instance, ned_horizon, ned_result, out);
    } catch (const medf::SearchCapExhausted& e) {
        std::cerr << "search cap exhausted at stage " << e.depth_reached << " on tuple "
                  << e.tuple_desc << ": " << e.what() << "\n";
        return 3;
    } catch (const medf::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const medf::ModulusError& e) {
        std::cerr << "modulus error: " << e.what() << "\n";
        return 2;
    } catch (const medf::CertificateError& e) {
        std::cerr << "certificate error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
