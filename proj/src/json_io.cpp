#include "medf/json_io.hpp"

#include "medf/errors.hpp"
#include "medf/orders.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>

namespace medf {

namespace {

const Json& need(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw InputError(where + ": missing key \"" + key + "\"");
    return j.at(key);
}

std::string string_from_json(const Json& j, const std::string& where) {
    if (!j.is_string()) throw InputError(where + ": expected a string");
    return j.get<std::string>();
}

// Accepts both storage classes nlohmann uses for whole numbers.
bool whole_number(const Json& j, std::uint64_t& out) {
    if (j.is_number_unsigned()) {
        out = j.get<std::uint64_t>();
        return true;
    }
    if (j.is_number_integer()) {
        auto v = j.get<std::int64_t>();
        if (v < 0) return false;
        out = static_cast<std::uint64_t>(v);
        return true;
    }
    return false;
}

unsigned small_from_json(const Json& j, const std::string& where) {
    std::uint64_t v = 0;
    if (!whole_number(j, v))
        throw InputError(where + ": expected a nonnegative integer");
    if (v > 1u << 30) throw InputError(where + ": value " + std::to_string(v) + " is too large");
    return static_cast<unsigned>(v);
}

} // namespace

Json nat_to_json(const Nat& n) { return Json(nat_str(n)); }

Nat nat_from_json(const Json& j, const std::string& where) {
    if (std::uint64_t v = 0; whole_number(j, v)) return Nat(static_cast<unsigned long>(v));
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw InputError(where + ": \"" + s + "\" is not a decimal natural");
        return Nat(s);
    }
    throw InputError(where + ": expected a natural number (decimal string or integer)");
}

std::uint64_t u64_from_json(const Json& j, const std::string& where) {
    if (std::uint64_t v = 0; whole_number(j, v)) return v;
    if (j.is_string()) {
        Nat n = nat_from_json(j, where);
        if (nat_bits(n) > 64) throw InputError(where + ": value does not fit in 64 bits");
        return nat_to_u64(n);
    }
    throw InputError(where + ": expected an unsigned integer");
}

Json bits_to_json(const Bits& s) {
    std::string out;
    out.reserve(s.size());
    for (auto b : s) out.push_back(b ? '1' : '0');
    return Json(out);
}

Bits bits_from_json(const Json& j, const std::string& where) {
    const std::string s = string_from_json(j, where);
    Bits out;
    out.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1')
            throw InputError(where + ": bit strings may only contain 0 and 1");
        out.push_back(c == '1' ? 1 : 0);
    }
    return out;
}

Json word_to_json(const Word& w) {
    Json out = Json::array();
    for (const Nat& v : w) out.push_back(nat_to_json(v));
    return out;
}

Word word_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected an array of naturals");
    Word out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(nat_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Rule rule_from_json(const Json& j, const std::string& where) {
    const std::string kind = string_from_json(need(j, "kind", where), where + ".kind");
    if (kind == "const") {
        Nat v = nat_from_json(need(j, "value", where), where + ".value");
        return [v](const Nat&) -> Nat { return v; };
    }
    if (kind == "affine") {
        Nat a = nat_from_json(need(j, "a", where), where + ".a");
        Nat b = nat_from_json(need(j, "b", where), where + ".b");
        return [a, b](const Nat& n) -> Nat { return Nat(a + b * n); };
    }
    if (kind == "cycle") {
        Word values = word_from_json(need(j, "values", where), where + ".values");
        if (values.empty()) throw InputError(where + ".values: a cycle needs at least one value");
        return [values](const Nat& n) -> Nat {
            Nat r = n % Nat(static_cast<unsigned long>(values.size()));
            return values[static_cast<std::size_t>(nat_to_u64(r))];
        };
    }
    throw InputError(where + ".kind: unknown rule kind \"" + kind + "\"");
}

namespace {

std::string rule_desc(const Json& j) {
    const std::string kind = j.value("kind", "?");
    if (kind == "const") return "const " + nat_str(nat_from_json(j.at("value"), "desc"));
    if (kind == "affine")
        return "affine " + nat_str(nat_from_json(j.at("a"), "desc")) + "+" +
               nat_str(nat_from_json(j.at("b"), "desc")) + "n";
    if (kind == "cycle") return "cycle of " + std::to_string(j.at("values").size());
    return kind;
}

} // namespace

EDFamily family_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected an array of member specs");
    EDFamily fam;
    std::vector<Nat> bounds;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        fam.members.push_back({rule_from_json(j[i], at), rule_desc(j[i])});
        bounds.push_back(nat_from_json(need(j[i], "certBound", at), at + ".certBound"));
    }
    fam.cert = [bounds](std::size_t a, std::size_t b) -> Nat {
        return std::max(bounds[a], bounds[b]);
    };
    return fam;
}

TransducerSpec transducer_from_json(const Json& j, const std::string& where) {
    TransducerSpec spec;
    const Json& states = need(j, "states", where);
    if (!states.is_array() || states.empty())
        throw InputError(where + ".states: expected a nonempty array of names");
    std::map<std::string, unsigned> index;
    for (std::size_t i = 0; i < states.size(); ++i) {
        std::string name = string_from_json(states[i], where + ".states");
        if (index.count(name)) throw InputError(where + ".states: duplicate name \"" + name + "\"");
        index[name] = static_cast<unsigned>(i);
        spec.states.push_back(std::move(name));
    }
    auto state_of = [&index](const Json& v, const std::string& at) {
        std::string name = string_from_json(v, at);
        auto it = index.find(name);
        if (it == index.end()) throw InputError(at + ": unknown state \"" + name + "\"");
        return it->second;
    };
    spec.start = state_of(need(j, "start", where), where + ".start");
    spec.arity = small_from_json(need(j, "arity", where), where + ".arity");

    const Json& trans = need(j, "trans", where);
    if (!trans.is_array()) throw InputError(where + ".trans: expected an array");
    std::vector<std::array<std::optional<TransducerSpec::Arc>, 2>> arcs(spec.states.size());
    for (std::size_t i = 0; i < trans.size(); ++i) {
        const std::string at = where + ".trans[" + std::to_string(i) + "]";
        unsigned from = state_of(need(trans[i], "from", at), at + ".from");
        unsigned bit = small_from_json(need(trans[i], "bit", at), at + ".bit");
        if (bit > 1) throw InputError(at + ".bit: must be 0 or 1");
        if (arcs[from][bit])
            throw InputError(at + ": duplicate transition from \"" + spec.states[from] +
                             "\" on bit " + std::to_string(bit));
        TransducerSpec::Arc arc;
        arc.to = state_of(need(trans[i], "to", at), at + ".to");
        arc.out = word_from_json(need(trans[i], "out", at), at + ".out");
        arcs[from][bit] = std::move(arc);
    }
    spec.arcs.resize(spec.states.size());
    for (std::size_t s = 0; s < arcs.size(); ++s)
        for (int b = 0; b < 2; ++b) {
            if (!arcs[s][b])
                throw InputError(where + ".trans: no transition from \"" + spec.states[s] +
                                 "\" on bit " + std::to_string(b));
            spec.arcs[s][static_cast<std::size_t>(b)] = std::move(*arcs[s][b]);
        }
    return spec;
}

namespace {

TableTail tail_from_json(const Json& j, const std::string& where) {
    const std::string t = string_from_json(j, where);
    if (t == "repeat-last") return TableTail::repeat_last;
    if (t == "zeros") return TableTail::zeros;
    throw InputError(where + ": tail must be \"repeat-last\" or \"zeros\", got \"" + t + "\"");
}

} // namespace

CodePtr code_from_json(const Json& j, const std::string& where) {
    const std::string kind = string_from_json(need(j, "kind", where), where + ".kind");
    if (kind == "transducer") return transducer_code(transducer_from_json(j, where));
    if (kind == "table") {
        unsigned depth = small_from_json(need(j, "depth", where), where + ".depth");
        const Json& rows = need(j, "table", where);
        if (!rows.is_array()) throw InputError(where + ".table: expected an array of pairs");
        std::map<Bits, Word> table;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string at = where + ".table[" + std::to_string(i) + "]";
            if (!rows[i].is_array() || rows[i].size() != 2)
                throw InputError(at + ": expected [input, output]");
            table[bits_from_json(rows[i][0], at + "[0]")] = word_from_json(rows[i][1], at + "[1]");
        }
        return table_code(depth, std::move(table), tail_from_json(need(j, "tail", where), where + ".tail"));
    }
    throw InputError(where + ".kind: unknown code kind \"" + kind + "\"");
}

ProductCodePtr product_code_from_json(const Json& j, const std::string& where) {
    const std::string kind = string_from_json(need(j, "kind", where), where + ".kind");
    if (kind == "transducer") return transducer_product_code(transducer_from_json(j, where));
    if (kind == "const") return const_product_code(word_from_json(need(j, "out", where), where + ".out"));
    throw InputError(where + ".kind: unknown product code kind \"" + kind + "\"");
}

SkeletonTree tree_from_json(const Json& j, const std::string& where) {
    const std::string kind = string_from_json(need(j, "kind", where), where + ".kind");
    if (kind == "full") return full_tree();
    if (kind == "seeded") {
        std::uint64_t seed = u64_from_json(need(j, "seed", where), where + ".seed");
        unsigned max_pad = small_from_json(need(j, "maxPad", where), where + ".maxPad");
        return seeded_skeleton(seed, max_pad);
    }
    if (kind == "table") {
        unsigned depth = small_from_json(need(j, "depth", where), where + ".depth");
        const Json& rows = need(j, "rows", where);
        if (!rows.is_array()) throw InputError(where + ".rows: expected an array of pairs");
        std::map<Bits, Bits> table;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string at = where + ".rows[" + std::to_string(i) + "]";
            if (!rows[i].is_array() || rows[i].size() != 2)
                throw InputError(at + ": expected [index, node]");
            table[bits_from_json(rows[i][0], at + "[0]")] = bits_from_json(rows[i][1], at + "[1]");
        }
        return tree_from_table(std::move(table), depth);
    }
    throw InputError(where + ".kind: unknown tree kind \"" + kind + "\"");
}

NedInput ned_from_json(const Json& j, const std::string& where) {
    NedInput in;
    in.f = rule_from_json(need(j, "f", where), where + ".f");
    const Json& fam = need(j, "family", where);
    if (!fam.is_array()) throw InputError(where + ".family: expected an array");
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const std::string at = where + ".family[" + std::to_string(i) + "]";
        const Json& fn = need(fam[i], "fn", at);
        in.family.push_back({rule_from_json(fn, at + ".fn"), rule_desc(fn)});
        in.avoid_bound.push_back(nat_from_json(need(fam[i], "B", at), at + ".B"));
    }
    in.h_star = rule_from_json(need(j, "hStar", where), where + ".hStar");
    in.g_star = rule_from_json(need(j, "gStar", where), where + ".gStar");
    return in;
}

Json tree_prefix_json(const SkeletonTree& tree, unsigned depth) {
    Json rows = Json::array();
    Nat count = (Nat(1) << (depth + 1)) - 1;
    for (Nat i = 0; i < count; ++i) {
        Bits c = node_unindex(i);
        rows.push_back(Json::array({bits_to_json(c), bits_to_json(tree.skel(c))}));
    }
    return Json{{"depth", depth}, {"skeleton", rows}};
}

Json catch_trace_json(const CatchResult& result, unsigned depth) {
    Json rows = Json::array();
    Nat count = (Nat(1) << (depth + 1)) - 1;
    for (Nat i = 0; i < count; ++i) {
        Bits c = node_unindex(i);
        CatchRow row = result.trace(c);
        rows.push_back(Json{{"c", bits_to_json(c)},
                            {"t_c", bits_to_json(row.node)},
                            {"index", nat_to_json(row.index)},
                            {"value", nat_to_json(row.value)}});
    }
    return rows;
}

Json product_result_json(const ProductCatchResult& result) {
    Json h0 = Json::array();
    for (const auto& [m, v] : result.h0) h0.push_back(Json::array({nat_to_json(m), nat_to_json(v)}));

    auto tuple_json = [](const std::vector<Bits>& xs) {
        Json out = Json::array();
        for (const Bits& x : xs) out.push_back(bits_to_json(x));
        return out;
    };
    Json rows = Json::array();
    for (const FrontRow& row : result.rows)
        rows.push_back(Json{{"stage", row.stage},
                            {"indices", tuple_json(row.indices)},
                            {"tuple", tuple_json(row.tuple)},
                            {"d", tuple_json(row.d)},
                            {"m", nat_to_json(row.m)},
                            {"value", nat_to_json(row.value)}});

    return Json{{"arity", result.arity},
                {"depth", result.depth},
                {"h0", h0},
                {"frontTraces", rows}};
}

} // namespace medf
