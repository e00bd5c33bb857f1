#include "medf/code.hpp"

#include "medf/errors.hpp"

#include <algorithm>
#include <sstream>

namespace medf {

namespace {

void check_spec(const TransducerSpec& spec) {
    if (spec.states.empty()) throw InputError("transducer needs at least one state");
    if (spec.arcs.size() != spec.states.size())
        throw InputError("transducer needs exactly one arc pair per state");
    if (spec.start >= spec.states.size()) throw InputError("transducer start state out of range");
    for (const auto& pair : spec.arcs)
        for (const auto& arc : pair)
            if (arc.to >= spec.states.size())
                throw InputError("transducer arc target out of range");
}

Word run_stream(const TransducerSpec& spec, const std::function<std::uint8_t(std::size_t)>& bit,
                std::size_t len) {
    Word out;
    unsigned state = spec.start;
    for (std::size_t i = 0; i < len; ++i) {
        const auto& arc = spec.arcs[state][bit(i) ? 1 : 0];
        out.insert(out.end(), arc.out.begin(), arc.out.end());
        state = arc.to;
    }
    return out;
}

struct TransducerCode final : Code {
    explicit TransducerCode(TransducerSpec s) : spec(std::move(s)) {}
    Word apply(const Bits& s) const override {
        return run_stream(spec, [&](std::size_t i) { return s[i]; }, s.size());
    }
    std::size_t modulus(std::size_t n) const override { return n * spec.states.size(); }
    TransducerSpec spec;
};

struct TransducerProduct final : ProductCode {
    explicit TransducerProduct(TransducerSpec s) : spec(std::move(s)) {}
    unsigned arity() const override { return spec.arity; }
    Word apply(const std::vector<Bits>& tuple) const override {
        if (tuple.size() > spec.arity)
            throw InputError("tuple longer than the code arity");
        if (tuple.size() < spec.arity) return {}; // missing coordinates: no input yet
        std::size_t m = tuple.empty() ? 0 : tuple[0].size();
        for (const auto& s : tuple) m = std::min(m, s.size());
        unsigned a = spec.arity;
        return run_stream(
            spec, [&](std::size_t i) { return tuple[i % a][i / a]; }, std::size_t{m} * a);
    }
    std::size_t modulus(std::size_t n) const override { return n * spec.states.size(); }
    TransducerSpec spec;
};

struct TableCodeImpl final : Code {
    TableCodeImpl(unsigned d, std::map<Bits, Word> t, TableTail tl)
        : depth(d), table(std::move(t)), tail(tl) {
        Bits probe;
        check_total(probe, 0);
    }
    void check_total(Bits& s, unsigned len) const {
        if (table.find(s) == table.end())
            throw InputError("table code is missing an entry for " + bits_to_string(s));
        if (len == depth) return;
        for (int b = 0; b < 2; ++b) {
            s.push_back(static_cast<std::uint8_t>(b));
            check_total(s, len + 1);
            s.pop_back();
        }
    }
    Word apply(const Bits& s) const override {
        if (s.size() <= depth) return table.at(s);
        Bits head(s.begin(), s.begin() + depth);
        Word out = table.at(head);
        Nat pad = 0;
        if (tail == TableTail::repeat_last && !out.empty()) pad = out.back();
        out.insert(out.end(), s.size() - depth, pad);
        return out;
    }
    std::size_t modulus(std::size_t n) const override { return depth + n; }
    unsigned depth;
    std::map<Bits, Word> table;
    TableTail tail;
};

struct ConstProduct final : ProductCode {
    explicit ConstProduct(Word w) : out(std::move(w)) {}
    unsigned arity() const override { return 0; }
    Word apply(const std::vector<Bits>& tuple) const override {
        if (!tuple.empty()) throw InputError("arity-0 code applied to a nonempty tuple");
        return out;
    }
    std::size_t modulus(std::size_t) const override { return 0; }
    Word out;
};

struct WrapProduct final : ProductCode {
    explicit WrapProduct(CodePtr c) : code(std::move(c)) {}
    unsigned arity() const override { return 1; }
    Word apply(const std::vector<Bits>& tuple) const override {
        if (tuple.empty()) return {};
        if (tuple.size() != 1) throw InputError("tuple longer than the code arity");
        return code->apply(tuple[0]);
    }
    std::size_t modulus(std::size_t n) const override { return code->modulus(n); }
    CodePtr code;
};

} // namespace

CodePtr transducer_code(const TransducerSpec& spec) {
    check_spec(spec);
    if (spec.arity != 1) throw InputError("transducer_code requires arity 1");
    return std::make_shared<TransducerCode>(spec);
}

ProductCodePtr transducer_product_code(const TransducerSpec& spec) {
    check_spec(spec);
    if (spec.arity < 1) throw InputError("transducer_product_code requires arity >= 1");
    return std::make_shared<TransducerProduct>(spec);
}

std::optional<std::vector<std::string>> transducer_silent_cycle(const TransducerSpec& spec) {
    check_spec(spec);
    // Cycle detection in the subgraph of zero-output arcs.
    enum { White, Grey, Black };
    std::vector<int> color(spec.states.size(), White);
    std::vector<unsigned> stack, path;
    std::function<bool(unsigned)> dfs = [&](unsigned v) -> bool {
        color[v] = Grey;
        path.push_back(v);
        for (int b = 0; b < 2; ++b) {
            const auto& arc = spec.arcs[v][b];
            if (!arc.out.empty()) continue;
            if (color[arc.to] == Grey) {
                auto it = std::find(path.begin(), path.end(), arc.to);
                stack.assign(it, path.end());
                return true;
            }
            if (color[arc.to] == White && dfs(arc.to)) return true;
        }
        path.pop_back();
        color[v] = Black;
        return false;
    };
    for (unsigned v = 0; v < spec.states.size(); ++v)
        if (color[v] == White && dfs(v)) {
            std::vector<std::string> names;
            for (unsigned s : stack) names.push_back(spec.states[s]);
            return names;
        }
    return std::nullopt;
}

CodePtr table_code(unsigned depth, std::map<Bits, Word> table, TableTail tail) {
    return std::make_shared<TableCodeImpl>(depth, std::move(table), tail);
}

ProductCodePtr const_product_code(Word out) {
    return std::make_shared<ConstProduct>(std::move(out));
}

ProductCodePtr product_of(CodePtr code) {
    if (!code) throw InputError("product_of: null code");
    return std::make_shared<WrapProduct>(std::move(code));
}

TransducerSpec echo_spec() {
    TransducerSpec spec;
    spec.states = {"q"};
    spec.start = 0;
    spec.arity = 1;
    spec.arcs = {{TransducerSpec::Arc{0, {Nat(0)}}, TransducerSpec::Arc{0, {Nat(1)}}}};
    return spec;
}

TransducerSpec const_emit_spec(const Nat& value) {
    TransducerSpec spec;
    spec.states = {"q"};
    spec.start = 0;
    spec.arity = 1;
    spec.arcs = {{TransducerSpec::Arc{0, {value}}, TransducerSpec::Arc{0, {value}}}};
    return spec;
}

BranchBits branch_constant(std::uint8_t bit) {
    return [bit](std::size_t) { return bit; };
}

BranchBits branch_from_prefix(Bits prefix, std::uint8_t fill) {
    return [prefix = std::move(prefix), fill](std::size_t i) {
        return i < prefix.size() ? prefix[i] : fill;
    };
}

Word eval_star(const Code& f, const BranchBits& x, std::size_t n) {
    Word w = f.apply(branch_prefix(x, f.modulus(n)));
    if (w.size() < n)
        throw ModulusError("code modulus unsound: wanted " + std::to_string(n) + " outputs at depth " +
                           std::to_string(f.modulus(n)) + ", got " + std::to_string(w.size()));
    w.resize(n);
    return w;
}

Word eval_product_prefix(const ProductCode& f, const std::vector<BranchBits>& xs,
                         std::size_t depth) {
    if (xs.size() != f.arity()) throw InputError("branch tuple does not match code arity");
    std::vector<Bits> tuple;
    tuple.reserve(xs.size());
    for (const auto& x : xs) tuple.push_back(branch_prefix(x, depth));
    return f.apply(tuple);
}

Word eval_product_star(const ProductCode& f, const std::vector<BranchBits>& xs, std::size_t n) {
    Word w = eval_product_prefix(f, xs, f.modulus(n));
    if (w.size() < n)
        throw ModulusError("product code modulus unsound: wanted " + std::to_string(n) +
                           " outputs at square depth " + std::to_string(f.modulus(n)) + ", got " +
                           std::to_string(w.size()));
    w.resize(n);
    return w;
}

namespace {

void add_violation(CodeReport& report, std::string kind, std::string witness) {
    report.ok = false;
    if (report.violations.size() < 32)
        report.violations.push_back({std::move(kind), std::move(witness)});
}

std::string word_str(const Word& w) {
    std::ostringstream os;
    os << "<";
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i].get_str();
    os << ">";
    return os.str();
}

} // namespace

CodeReport validate_code(const Code& f, unsigned depth, const TransducerSpec* spec) {
    CodeReport report;

    if (spec) {
        if (auto cycle = transducer_silent_cycle(*spec)) {
            std::string names;
            for (const auto& s : *cycle) names += (names.empty() ? "" : "->") + s;
            add_violation(report, "cycle-emission", "silent cycle through " + names);
        }
    }

    // Monotonicity along every edge of the input tree up to `depth`.
    std::vector<Bits> level = {Bits{}};
    std::vector<Word> level_out = {f.apply(Bits{})};
    for (unsigned n = 0; n < depth; ++n) {
        std::vector<Bits> next;
        std::vector<Word> next_out;
        next.reserve(level.size() * 2);
        next_out.reserve(level.size() * 2);
        for (std::size_t j = 0; j < level.size(); ++j) {
            for (int b = 0; b < 2; ++b) {
                Bits child = append(level[j], static_cast<std::uint8_t>(b));
                Word w = f.apply(child);
                if (!word_is_prefix(level_out[j], w))
                    add_violation(report, "monotone",
                                  "s=" + bits_to_string(level[j]) + " s'=" + bits_to_string(child) +
                                      " f(s)=" + word_str(level_out[j]) +
                                      " f(s')=" + word_str(w));
                next.push_back(std::move(child));
                next_out.push_back(std::move(w));
            }
        }
        level = std::move(next);
        level_out = std::move(next_out);
    }

    // Modulus soundness, exhaustively for every n whose bound fits in depth.
    for (std::size_t n = 1; f.modulus(n) <= depth; ++n) {
        std::size_t d = f.modulus(n);
        Bits s(d, 0);
        while (true) {
            if (f.apply(s).size() < n)
                add_violation(report, "modulus",
                              "n=" + std::to_string(n) + " D(n)=" + std::to_string(d) +
                                  " s=" + bits_to_string(s) + " output too short");
            std::size_t i = d;
            while (i > 0 && s[i - 1] == 1) s[--i] = 0;
            if (i == 0) break;
            s[i - 1] = 1;
        }
        if (d == 0) break; // constant modulus; one pass said it all
    }

    return report;
}

CodeReport validate_product_code(const ProductCode& f, unsigned depth) {
    CodeReport report;
    unsigned a = f.arity();
    if (a == 0) return report;

    // Square-tuple chains: every square tuple of side <= depth, one bit
    // appended to every coordinate at once.
    std::vector<std::vector<Bits>> level = {std::vector<Bits>(a)};
    std::vector<Word> level_out = {f.apply(level[0])};
    for (unsigned n = 0; n < depth; ++n) {
        std::vector<std::vector<Bits>> next;
        std::vector<Word> next_out;
        for (std::size_t j = 0; j < level.size(); ++j) {
            // All 2^a one-step square extensions.
            for (unsigned mask = 0; mask < (1u << a); ++mask) {
                auto tuple = level[j];
                for (unsigned k = 0; k < a; ++k)
                    tuple[k].push_back(static_cast<std::uint8_t>((mask >> k) & 1));
                Word w = f.apply(tuple);
                if (!word_is_prefix(level_out[j], w))
                    add_violation(report, "monotone",
                                  "square tuple at side " + std::to_string(n) +
                                      " extension mask " + std::to_string(mask));
                next.push_back(std::move(tuple));
                next_out.push_back(std::move(w));
            }
        }
        level = std::move(next);
        level_out = std::move(next_out);
        if (level.size() > 100000) break; // arity 3+ grows fast; stay desk-sized
    }

    for (std::size_t n = 1; f.modulus(n) <= depth; ++n) {
        std::size_t d = f.modulus(n);
        std::vector<Bits> probe(a, Bits(d, 0));
        if (f.apply(probe).size() < n)
            add_violation(report, "modulus",
                          "n=" + std::to_string(n) + " all-zero square tuple at side " +
                              std::to_string(d) + " output too short");
        if (d == 0) break;
    }
    return report;
}

} // namespace medf
