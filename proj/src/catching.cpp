#include "medf/catching.hpp"

#include "medf/errors.hpp"
#include "medf/sampling.hpp"

#include <memory>

namespace medf {

namespace {

// First splitting node on the 0-side chain above `stem` whose output covers
// position n, as a p-index. The modulus bounds how deep the chain can need
// to go; running past it means the code lied about its modulus.
Bits first_fit_index(const SkeletonTree& p, const Code& f, const Bits& stem, std::size_t n) {
    Bits b = restrict_index(p, stem);
    std::size_t bound = f.modulus(n + 1);
    while (true) {
        Bits node = p.skel(b);
        if (f.apply(node).size() > n) return b;
        if (node.size() >= bound)
            throw ModulusError("no splitting node covering position " + std::to_string(n) +
                               " within modulus depth " + std::to_string(bound) +
                               " above stem " + bits_to_string(stem));
        b.push_back(0);
    }
}

} // namespace

CatchResult catch_single(const SkeletonTree& p, CodePtr f) {
    if (!p.valid()) throw InputError("catch_single: empty tree handle");
    if (!f) throw InputError("catch_single: null code");

    auto holder = std::make_shared<SkeletonTree>();
    auto rule = [p, f, holder](const Bits& c) -> Bits {
        Bits stem;
        if (!c.empty()) {
            Bits parent(c.begin(), c.end() - 1);
            stem = append(holder->skel(parent), c.back());
        }
        std::size_t n = nat_to_u64(node_index(c));
        return p.skel(first_fit_index(p, *f, stem, n));
    };
    *holder = tree_from_rule(rule);

    CatchResult result;
    result.q = *holder;
    SkeletonTree q = *holder;
    result.h = [q, f](const Nat& n) -> std::optional<Nat> {
        Bits c = node_unindex(n);
        Word w = f->apply(q.skel(c));
        std::size_t i = nat_to_u64(n);
        if (w.size() <= i) return std::nullopt;
        return w[i];
    };
    result.trace = [q, f](const Bits& c) -> CatchRow {
        Bits node = q.skel(c);
        Nat idx = node_index(c);
        Word w = f->apply(node);
        std::size_t i = nat_to_u64(idx);
        if (w.size() <= i)
            throw ModulusError("trace row " + bits_to_string(c) + " lost its output position");
        return CatchRow{std::move(node), std::move(idx), w[i]};
    };
    return result;
}

namespace {

void add_violation(CatchReport& report, std::string check, std::string witness) {
    report.ok = false;
    if (report.violations.size() < 32)
        report.violations.push_back({std::move(check), std::move(witness)});
}

} // namespace

CatchReport verify_catch(const CatchResult& result, const SkeletonTree& p, const Code& f,
                         unsigned depth) {
    CatchReport report;

    std::vector<Bits> level = {Bits{}};
    std::vector<Bits> nodes = {result.q.skel(Bits{})};
    for (unsigned n = 0; n <= depth; ++n) {
        for (std::size_t j = 0; j < level.size(); ++j) {
            const Bits& c = level[j];
            const Bits& tc = nodes[j];
            std::string where = "c=" + bits_to_string(c) + " t_c=" + bits_to_string(tc);

            // t_c is a splitting node of p.
            try {
                Bits b = homeo_prefix(p, tc);
                if (p.skel(b) != tc) add_violation(report, "splitting", where);
            } catch (const InputError&) {
                add_violation(report, "membership", where);
            }

            // t_{c^i} extends t_c^i (the successors diverge at lh(t_c)).
            if (!c.empty()) {
                Bits parent(c.begin(), c.end() - 1);
                Bits stem = append(result.q.skel(parent), c.back());
                if (!is_prefix(stem, tc)) add_violation(report, "successor", where);
            }

            // The code's output at t_c covers node_index(c), and h caught it.
            Nat idx = node_index(c);
            std::size_t i = nat_to_u64(idx);
            Word w = f.apply(tc);
            if (w.size() <= i) {
                add_violation(report, "domain", where + " position " + idx.get_str());
            } else {
                auto hv = result.h(idx);
                if (!hv)
                    add_violation(report, "agreement", where + " h undefined at " + idx.get_str());
                else if (*hv != w[i])
                    add_violation(report, "agreement",
                                  where + " h(" + idx.get_str() + ")=" + hv->get_str() +
                                      " != " + w[i].get_str());
            }

            // Trace rows restate the same data.
            CatchRow row = result.trace(c);
            if (row.node != tc || row.index != idx)
                add_violation(report, "trace", where);
        }
        if (n == depth) break;
        std::vector<Bits> next, next_nodes;
        next.reserve(level.size() * 2);
        next_nodes.reserve(level.size() * 2);
        for (const Bits& c : level)
            for (int i = 0; i < 2; ++i) {
                Bits child = append(c, static_cast<std::uint8_t>(i));
                next_nodes.push_back(result.q.skel(child));
                next.push_back(std::move(child));
            }
        level = std::move(next);
        nodes = std::move(next_nodes);
    }
    return report;
}

BranchBits tree_branch(const SkeletonTree& tree, std::uint64_t seed, std::uint64_t coord) {
    struct Walk {
        SkeletonTree tree;
        std::uint64_t seed, coord;
        Bits index, node;
        std::size_t step = 0;
    };
    auto walk = std::make_shared<Walk>(Walk{tree, seed, coord, {}, tree.skel(Bits{}), 0});
    return [walk](std::size_t i) -> std::uint8_t {
        while (walk->node.size() <= i) {
            walk->index.push_back(
                static_cast<std::uint8_t>(branch_bit(walk->seed, walk->coord, walk->step)));
            ++walk->step;
            walk->node = walk->tree.skel(walk->index);
        }
        return walk->node[i];
    };
}

std::vector<std::pair<Nat, Nat>> branch_agreements(const CatchResult& result, const Code& f,
                                                   std::uint64_t seed, std::uint64_t coord,
                                                   unsigned levels) {
    BranchBits x = tree_branch(result.q, seed, coord);
    std::vector<std::pair<Nat, Nat>> out;
    out.reserve(levels + 1);
    for (const Bits& c : sampled_branch_indices(seed, coord, levels)) {
        Nat idx = node_index(c);
        std::size_t n = nat_to_u64(idx);
        auto hv = result.h(idx);
        if (!hv)
            throw CertificateError("h undefined at branch skeleton position " + idx.get_str());
        Word w = eval_star(f, x, n + 1);
        if (w[n] != *hv)
            throw CertificateError("branch disagrees with h at position " + idx.get_str() +
                                   ": f*=" + w[n].get_str() + " h=" + hv->get_str());
        out.emplace_back(std::move(idx), *hv);
    }
    return out;
}

TransducerSpec seeded_proper_transducer(std::uint64_t seed, unsigned max_states, unsigned arity) {
    if (max_states == 0) max_states = 1;
    std::uint64_t ctr = seed;
    auto next = [&ctr]() {
        ctr += 0x9E3779B97F4A7C15ull;
        return splitmix64(ctr);
    };

    TransducerSpec spec;
    unsigned n = 1 + static_cast<unsigned>(next() % max_states);
    for (unsigned i = 0; i < n; ++i) spec.states.push_back("s" + std::to_string(i));
    spec.start = static_cast<unsigned>(next() % n);
    spec.arity = arity;
    spec.arcs.resize(n);
    for (unsigned i = 0; i < n; ++i)
        for (int b = 0; b < 2; ++b) {
            auto& arc = spec.arcs[i][b];
            arc.to = static_cast<unsigned>(next() % n);
            unsigned len = static_cast<unsigned>(next() % 3);
            for (unsigned k = 0; k < len; ++k) arc.out.emplace_back(next() % 10);
        }

    // Repair silent cycles by making one of their arcs emit; each pass kills
    // at least one silent arc, so this terminates.
    while (auto cycle = transducer_silent_cycle(spec)) {
        for (std::size_t i = 0; i < spec.states.size() && !cycle->empty(); ++i) {
            if (spec.states[i] != cycle->front()) continue;
            for (int b = 0; b < 2; ++b)
                if (spec.arcs[i][b].out.empty()) {
                    spec.arcs[i][b].out.emplace_back(next() % 10);
                    b = 2;
                }
            break;
        }
    }
    return spec;
}

} // namespace medf
