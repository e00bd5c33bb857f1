#include "medf/tree.hpp"

#include "medf/errors.hpp"
#include "medf/sampling.hpp"

#include <mutex>
#include <unordered_map>
#include <utility>

namespace medf {

class SkeletonTree::Impl {
public:
    virtual ~Impl() = default;
    virtual Bits compute(const Bits& c) const = 0;

    Bits skel(const Bits& c) const {
        // Deep indices come from one-shot chain probes in the fusion search;
        // caching those would pin arbitrarily long nodes for a single use.
        if (c.size() > kMemoMaxIndex) return compute(c);
        std::string key = bits_to_string(c);
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        Bits value = compute(c);
        std::lock_guard<std::mutex> lock(mu_);
        return memo_.emplace(std::move(key), std::move(value)).first->second;
    }

private:
    static constexpr std::size_t kMemoMaxIndex = 64;

    mutable std::mutex mu_;
    mutable std::unordered_map<std::string, Bits> memo_;
};

Bits SkeletonTree::skel(const Bits& c) const {
    if (!impl_) throw InputError("skel() on an empty tree handle");
    return impl_->skel(c);
}

namespace {

struct IdentityImpl final : SkeletonTree::Impl {
    Bits compute(const Bits& c) const override { return c; }
};

struct RuleImpl final : SkeletonTree::Impl {
    explicit RuleImpl(std::function<Bits(const Bits&)> r) : rule(std::move(r)) {}
    Bits compute(const Bits& c) const override { return rule(c); }
    std::function<Bits(const Bits&)> rule;
};

struct TableImpl final : SkeletonTree::Impl {
    TableImpl(std::map<Bits, Bits> t, unsigned d) : table(std::move(t)), depth(d) {}
    Bits compute(const Bits& c) const override {
        if (c.size() > depth)
            throw InputError("skeleton table only covers indices of length <= " +
                             std::to_string(depth));
        auto it = table.find(c);
        if (it == table.end())
            throw InputError("skeleton table has no entry for index " + bits_to_string(c));
        return it->second;
    }
    std::map<Bits, Bits> table;
    unsigned depth;
};

struct ComposeImpl final : SkeletonTree::Impl {
    ComposeImpl(SkeletonTree o, SkeletonTree i) : outer(std::move(o)), inner(std::move(i)) {}
    Bits compute(const Bits& c) const override { return outer.skel(inner.skel(c)); }
    SkeletonTree outer, inner;
};

// Index translation layer: below each listed base index, splice in the
// recorded relative index before consulting the parent. One layer per
// fusion stage is enough because same-stage deepenings just extend the
// spliced string.
struct GraftImpl final : SkeletonTree::Impl {
    GraftImpl(SkeletonTree p, unsigned bl, std::map<Bits, Bits> g)
        : parent(std::move(p)), base_len(bl), grafts(std::move(g)) {}
    Bits compute(const Bits& c) const override {
        if (c.size() < base_len) return parent.skel(c);
        Bits base(c.begin(), c.begin() + base_len);
        auto it = grafts.find(base);
        if (it == grafts.end()) return parent.skel(c);
        Bits translated = base;
        translated.insert(translated.end(), it->second.begin(), it->second.end());
        translated.insert(translated.end(), c.begin() + base_len, c.end());
        return parent.skel(translated);
    }
    SkeletonTree parent;
    unsigned base_len;
    std::map<Bits, Bits> grafts;
};

struct SeededImpl final : SkeletonTree::Impl {
    SeededImpl(std::uint64_t s, unsigned mp) : seed(s), max_pad(mp == 0 ? 1 : mp) {}
    Bits compute(const Bits& c) const override {
        Bits node = pad(Bits{}, 0);
        Bits idx;
        for (auto b : c) {
            node.push_back(b);
            idx.push_back(b);
            node = pad(node, node_key(idx));
        }
        return node;
    }
    // Appends hash-determined padding (possibly none) after the step to index
    // `key`; keeps the construction monotone and successor-faithful.
    Bits pad(Bits node, std::uint64_t key) const {
        std::uint64_t h = splitmix64(seed ^ splitmix64(key));
        unsigned len = static_cast<unsigned>(h % max_pad);
        for (unsigned i = 0; i < len; ++i) {
            h = splitmix64(h);
            node.push_back(static_cast<std::uint8_t>(h & 1));
        }
        return node;
    }
    static std::uint64_t node_key(const Bits& idx) {
        // Same numbering as node_index, confined to 64 bits; indices stay
        // shallow enough in practice that this never wraps.
        std::uint64_t v = 1;
        for (auto b : idx) v = (v << 1) | b;
        return v;
    }
    std::uint64_t seed;
    unsigned max_pad;
};

} // namespace

SkeletonTree full_tree() {
    static const auto impl = std::make_shared<const IdentityImpl>();
    return SkeletonTree(impl);
}

SkeletonTree tree_from_rule(std::function<Bits(const Bits&)> rule) {
    return SkeletonTree(std::make_shared<const RuleImpl>(std::move(rule)));
}

SkeletonTree seeded_skeleton(std::uint64_t seed, unsigned max_pad) {
    return SkeletonTree(std::make_shared<const SeededImpl>(seed, max_pad));
}

SkeletonTree tree_from_table(std::map<Bits, Bits> table, unsigned depth) {
    return SkeletonTree(std::make_shared<const TableImpl>(std::move(table), depth));
}

SkeletonTree graft_layer(const SkeletonTree& parent, unsigned base_len,
                         std::map<Bits, Bits> grafts) {
    return SkeletonTree(std::make_shared<const GraftImpl>(parent, base_len, std::move(grafts)));
}

bool contains(const SkeletonTree& tree, const Bits& s) {
    Bits c;
    while (true) {
        Bits t = tree.skel(c);
        if (is_prefix(s, t)) return true;
        if (!is_prefix(t, s)) return false;
        // t is a proper prefix of s; the next bit of s picks the subtree.
        c.push_back(s[t.size()]);
        if (c.size() > s.size()) return false; // defensive; lengths grow each step
    }
}

std::vector<Bits> nth_splitting_front(const SkeletonTree& tree, unsigned n) {
    std::vector<Bits> out;
    out.reserve(std::size_t{1} << n);
    Bits c(n, 0);
    // Binary counting over indices of length n = lex order of the front.
    while (true) {
        out.push_back(tree.skel(c));
        std::size_t i = n;
        while (i > 0 && c[i - 1] == 1) c[--i] = 0;
        if (i == 0) break;
        c[i - 1] = 1;
    }
    if (n == 0) out.resize(1);
    return out;
}

std::vector<Bits> succ_of_nth_front(const SkeletonTree& tree, unsigned n) {
    std::vector<Bits> out;
    out.reserve(std::size_t{2} << n);
    for (const Bits& t : nth_splitting_front(tree, n)) {
        out.push_back(append(t, 0));
        out.push_back(append(t, 1));
    }
    return out;
}

Bits restrict_index(const SkeletonTree& tree, const Bits& t) {
    Bits c;
    while (true) {
        Bits node = tree.skel(c);
        if (is_prefix(t, node)) return c;
        if (!is_prefix(node, t))
            throw InputError("restrict: node " + bits_to_string(t) + " is not in the tree");
        c.push_back(t[node.size()]);
    }
}

SkeletonTree restrict(const SkeletonTree& tree, const Bits& t) {
    Bits cstar = restrict_index(tree, t);
    if (cstar.empty()) return tree;
    return graft_layer(tree, 0, {{Bits{}, cstar}});
}

SkeletonTree pullback(const SkeletonTree& outer, const SkeletonTree& inner) {
    return SkeletonTree(std::make_shared<const ComposeImpl>(outer, inner));
}

Bits homeo_prefix(const SkeletonTree& tree, const Bits& s) {
    Bits c;
    Bits node = tree.skel(c);
    if (!is_prefix(node, s)) {
        if (!contains(tree, s))
            throw InputError("homeo_prefix: node " + bits_to_string(s) + " is not in the tree");
        return c; // s sits on the stem below the first splitting node
    }
    while (true) {
        if (node.size() >= s.size()) return c;
        Bits next = append(c, s[node.size()]);
        Bits next_node = tree.skel(next);
        if (!is_prefix(next_node, s)) {
            if (!comparable(next_node, s) && !contains(tree, s))
                throw InputError("homeo_prefix: node " + bits_to_string(s) +
                                 " is not in the tree");
            return c;
        }
        c = std::move(next);
        node = std::move(next_node);
    }
}

namespace {

void add_violation(TreeReport& report, std::string invariant, std::string witness) {
    report.ok = false;
    if (report.violations.size() < 32)
        report.violations.push_back({std::move(invariant), std::move(witness)});
}

} // namespace

TreeReport validate(const SkeletonTree& tree, unsigned depth) {
    TreeReport report;

    // Gather all skeleton values level by level.
    std::vector<std::vector<Bits>> idx_levels(depth + 1), node_levels(depth + 1);
    idx_levels[0] = {Bits{}};
    for (unsigned n = 1; n <= depth; ++n) {
        idx_levels[n].reserve(std::size_t{1} << n);
        for (const Bits& c : idx_levels[n - 1]) {
            idx_levels[n].push_back(append(c, 0));
            idx_levels[n].push_back(append(c, 1));
        }
    }
    for (unsigned n = 0; n <= depth; ++n) {
        node_levels[n].reserve(idx_levels[n].size());
        for (const Bits& c : idx_levels[n]) node_levels[n].push_back(tree.skel(c));
    }

    // Successor faithfulness: t_{c^i} extends t_c^i.
    for (unsigned n = 0; n < depth; ++n) {
        for (std::size_t j = 0; j < idx_levels[n].size(); ++j) {
            const Bits& tc = node_levels[n][j];
            for (int i = 0; i < 2; ++i) {
                const Bits& child = node_levels[n + 1][2 * j + i];
                if (!is_prefix(append(tc, static_cast<std::uint8_t>(i)), child))
                    add_violation(report, "successor",
                                  "c=" + bits_to_string(idx_levels[n][j]) +
                                      " i=" + std::to_string(i) + " t_c=" + bits_to_string(tc) +
                                      " t_ci=" + bits_to_string(child));
            }
        }
    }

    // Monotonicity along all ancestor chains.
    for (unsigned n = 1; n <= depth; ++n) {
        for (std::size_t j = 0; j < idx_levels[n].size(); ++j) {
            const Bits& c = idx_levels[n][j];
            const Bits& tc = node_levels[n][j];
            std::size_t anc = j;
            for (unsigned m = n; m-- > 0;) {
                anc /= 2;
                if (!is_prefix(node_levels[m][anc], tc))
                    add_violation(report, "monotone",
                                  "c=" + bits_to_string(idx_levels[m][anc]) +
                                      " c'=" + bits_to_string(c) + " t_c=" +
                                      bits_to_string(node_levels[m][anc]) +
                                      " t_c'=" + bits_to_string(tc));
            }
        }
    }

    // Lex preservation on incomparable index pairs.
    std::vector<std::pair<Bits, Bits>> flat;
    for (unsigned n = 0; n <= depth; ++n)
        for (std::size_t j = 0; j < idx_levels[n].size(); ++j)
            flat.emplace_back(idx_levels[n][j], node_levels[n][j]);
    for (std::size_t a = 0; a < flat.size(); ++a) {
        for (std::size_t b = a + 1; b < flat.size(); ++b) {
            if (comparable(flat[a].first, flat[b].first)) continue;
            if (lex_compare(flat[a].first, flat[b].first) !=
                lex_compare(flat[a].second, flat[b].second))
                add_violation(report, "lex-preservation",
                              "(" + bits_to_string(flat[a].first) + "," +
                                  bits_to_string(flat[b].first) + ") nodes (" +
                                  bits_to_string(flat[a].second) + "," +
                                  bits_to_string(flat[b].second) + ")");
        }
    }

    // Fronts: 2^n pairwise incomparable nodes per level.
    for (unsigned n = 0; n <= depth; ++n) {
        const auto& front = node_levels[n];
        if (front.size() != (std::size_t{1} << n))
            add_violation(report, "front", "level " + std::to_string(n) + " has " +
                                               std::to_string(front.size()) + " nodes");
        for (std::size_t a = 0; a < front.size(); ++a)
            for (std::size_t b = a + 1; b < front.size(); ++b)
                if (comparable(front[a], front[b]))
                    add_violation(report, "front",
                                  "level " + std::to_string(n) + " nodes " +
                                      bits_to_string(front[a]) + " and " +
                                      bits_to_string(front[b]) + " are comparable");
    }

    return report;
}

Bits sampled_branch_prefix(const SkeletonTree& tree, std::uint64_t seed,
                           std::uint64_t coord, std::size_t min_len,
                           std::size_t max_steps) {
    Bits c;
    Bits node = tree.skel(c);
    std::size_t step = 0;
    while (node.size() < min_len && step < max_steps) {
        c.push_back(static_cast<std::uint8_t>(branch_bit(seed, coord, step)));
        ++step;
        node = tree.skel(c);
    }
    if (node.size() < min_len)
        throw ModulusError("sampled branch did not reach length " + std::to_string(min_len) +
                           " within " + std::to_string(max_steps) + " splitting levels");
    return node;
}

std::vector<Bits> sampled_branch_indices(std::uint64_t seed, std::uint64_t coord,
                                         unsigned depth) {
    std::vector<Bits> out;
    out.reserve(depth + 1);
    Bits c;
    out.push_back(c);
    for (unsigned step = 0; step < depth; ++step) {
        c.push_back(static_cast<std::uint8_t>(branch_bit(seed, coord, step)));
        out.push_back(c);
    }
    return out;
}

} // namespace medf
