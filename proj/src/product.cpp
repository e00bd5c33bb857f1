#include "medf/product.hpp"

#include "medf/sampling.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace medf {

namespace {

std::string tuple_desc(unsigned stage, const std::vector<Bits>& indices) {
    std::ostringstream os;
    os << "stage " << stage << " front (";
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (k) os << ",";
        os << bits_to_string(indices[k]);
    }
    os << ")";
    return os.str();
}

// Binary +1 over a tuple of equal-length index blocks, coordinate 0 most
// significant. Returns false once the counter wraps to all zeros.
bool next_index_tuple(std::vector<Bits>& indices) {
    for (std::size_t k = indices.size(); k-- > 0;) {
        for (std::size_t i = indices[k].size(); i-- > 0;) {
            if (indices[k][i] == 0) {
                indices[k][i] = 1;
                return true;
            }
            indices[k][i] = 0;
        }
    }
    return false;
}

struct FreshPick {
    std::vector<Bits> d;
    std::size_t m = 0;
    Nat value;
    unsigned e_star = 0;
};

// One front tuple's search. Candidates are the all-zero chain extensions of
// chain_base in the current trees: one node tuple per extension depth e, so
// the deterministic lex-least choice at every depth. The output word only
// grows with e and never changes at old positions, so the first position
// (scanned in increasing order, across depths) that is fresh and avoids the
// family is the least such position overall; the least depth whose output
// covers it is then recovered by binary search between the last two probes.
// The probe schedule cannot affect the result, only the cost, so the upward
// phase doubles the depth, capped by the modulus-guaranteed sufficient jump.
FreshPick search_fresh_position(const std::vector<SkeletonTree>& cur,
                                const std::vector<Bits>& chain_base, const ProductCode& f,
                                const EDFamily& family, const std::set<Nat>& used,
                                unsigned search_cap, const std::string& desc) {
    const unsigned arity = static_cast<unsigned>(cur.size());

    auto avoiding = [&](std::size_t m, const Nat& v) {
        Nat nm(static_cast<unsigned long>(m));
        if (used.count(nm)) return false;
        for (std::size_t j = 0; j < family.size() && j <= m; ++j)
            if (family.value(j, nm) == v) return false;
        return true;
    };

    if (arity == 0) {
        Word w = f.apply({});
        for (std::size_t m = 0; m < w.size(); ++m)
            if (avoiding(m, w[m])) {
                FreshPick pick;
                pick.m = m;
                pick.value = w[m];
                return pick;
            }
        throw SearchCapExhausted(desc + ": the fixed output word (length " +
                                     std::to_string(w.size()) +
                                     ") has no fresh avoiding position",
                                 desc, 0);
    }

    auto nodes_at = [&](unsigned e) {
        std::vector<Bits> nodes(arity);
        for (unsigned k = 0; k < arity; ++k) {
            Bits c = chain_base[k];
            c.insert(c.end(), e, 0);
            nodes[k] = cur[k].skel(c);
        }
        return nodes;
    };

    std::size_t scan_from = 0;
    unsigned e = 0;
    bool have_prev = false;
    unsigned prev_e = 0;
    while (true) {
        std::vector<Bits> nodes = nodes_at(e);
        Word w = f.apply(nodes);
        for (std::size_t m = scan_from; m < w.size(); ++m) {
            if (!avoiding(m, w[m])) continue;
            unsigned lo = have_prev ? prev_e + 1 : 0;
            unsigned hi = e;
            while (lo < hi) {
                unsigned mid = lo + (hi - lo) / 2;
                if (f.apply(nodes_at(mid)).size() > m) hi = mid;
                else lo = mid + 1;
            }
            FreshPick pick;
            pick.d = nodes_at(lo);
            pick.m = m;
            pick.e_star = lo;
            pick.value = f.apply(pick.d)[m];
            return pick;
        }
        scan_from = std::max(scan_from, w.size());
        std::size_t min_len = nodes[0].size();
        for (unsigned k = 1; k < arity; ++k) min_len = std::min(min_len, nodes[k].size());
        std::size_t target = f.modulus(scan_from + 1);
        if (min_len >= target)
            throw ModulusError(desc + ": tuple reached min coordinate length " +
                               std::to_string(min_len) + " >= modulus(" +
                               std::to_string(scan_from + 1) + ") = " + std::to_string(target) +
                               " yet the output has only " + std::to_string(scan_from) +
                               " positions");
        std::size_t jump = std::min<std::size_t>(target - min_len,
                                                 std::max<std::size_t>(1, e));
        if (static_cast<std::size_t>(e) + jump > search_cap)
            throw SearchCapExhausted(desc + ": no fresh avoiding position up to extension depth " +
                                         std::to_string(e) + " (cap " +
                                         std::to_string(search_cap) + ")",
                                     desc, e);
        have_prev = true;
        prev_e = e;
        e += static_cast<unsigned>(jump);
    }
}

void add_violation(CatchReport& report, std::string check, std::string witness) {
    report.ok = false;
    if (report.violations.size() < 32)
        report.violations.push_back({std::move(check), std::move(witness)});
}

} // namespace

ProductCondition full_product(unsigned arity) {
    ProductCondition p;
    p.coords.assign(arity, full_tree());
    return p;
}

ProductCondition seeded_product(std::uint64_t seed, unsigned arity, unsigned max_pad) {
    ProductCondition p;
    p.coords.reserve(arity);
    for (unsigned k = 0; k < arity; ++k)
        p.coords.push_back(
            seeded_skeleton(splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (k + 1))), max_pad));
    return p;
}

bool refines_mod(const ProductCondition& q, const ProductCondition& p,
                 const std::set<unsigned>& S, unsigned n, unsigned depth) {
    if (q.arity() != p.arity())
        throw InputError("refines_mod: arities " + std::to_string(q.arity()) + " and " +
                         std::to_string(p.arity()) + " differ");
    for (unsigned k : S)
        if (k >= q.arity())
            throw InputError("refines_mod: coordinate " + std::to_string(k) + " out of range");
    for (unsigned k = 0; k < q.arity(); ++k) {
        for (unsigned len = 0; len <= depth; ++len) {
            Bits c(len, 0);
            while (true) {
                if (!contains(p.coords[k], q.coords[k].skel(c))) return false;
                std::size_t i = len;
                while (i > 0 && c[i - 1] == 1) c[--i] = 0;
                if (i == 0) break;
                c[i - 1] = 1;
            }
        }
        if (S.count(k) &&
            nth_splitting_front(q.coords[k], n) != nth_splitting_front(p.coords[k], n))
            return false;
    }
    return true;
}

std::vector<std::vector<Bits>> tuple_front(const ProductCondition& p, unsigned n) {
    const unsigned fl = std::min(n, p.arity());
    std::vector<std::vector<Bits>> out;
    std::vector<Bits> indices(fl, Bits(n, 0));
    do {
        std::vector<Bits> tuple(fl);
        for (unsigned k = 0; k < fl; ++k) tuple[k] = p.coords[k].skel(indices[k]);
        out.push_back(std::move(tuple));
    } while (next_index_tuple(indices));
    return out;
}

ProductCondition with_tuple(const ProductCondition& p, const std::map<unsigned, Bits>& nodes) {
    ProductCondition out = p;
    for (const auto& [k, node] : nodes) {
        if (k >= p.arity())
            throw InputError("with_tuple: coordinate " + std::to_string(k) +
                             " out of range for arity " + std::to_string(p.arity()));
        try {
            out.coords[k] = restrict(p.coords[k], node);
        } catch (const InputError& err) {
            throw InputError("with_tuple: coordinate " + std::to_string(k) + ": " + err.what());
        }
    }
    return out;
}

ProductCatchResult catch_product_from(const ProductCondition& start, ProductCodePtr f,
                                      const EDFamily& family, unsigned search_cap,
                                      unsigned depth) {
    if (!f) throw InputError("catch_product: missing code");
    const unsigned arity = start.arity();
    if (f->arity() != arity)
        throw InputError("catch_product: code arity " + std::to_string(f->arity()) +
                         " does not match condition arity " + std::to_string(arity));
    for (const auto& t : start.coords)
        if (!t.valid()) throw InputError("catch_product: empty coordinate tree");

    ProductCatchResult out;
    out.arity = arity;
    out.depth = depth;
    out.stage_conditions.push_back(start);
    std::set<Nat> used;

    for (unsigned n = 1; n <= depth; ++n) {
        const ProductCondition base = out.stage_conditions.back();
        const unsigned fl = std::min(n, arity);
        std::vector<std::map<Bits, Bits>> grafts(arity);
        auto current = [&]() {
            ProductCondition c;
            c.coords.reserve(arity);
            for (unsigned k = 0; k < arity; ++k)
                c.coords.push_back(graft_layer(base.coords[k], k < fl ? n : 0, grafts[k]));
            return c;
        };

        std::vector<Bits> indices(fl, Bits(n, 0));
        do {
            ProductCondition cur = current();
            std::vector<Bits> chain_base(arity);
            std::vector<Bits> tuple(fl);
            for (unsigned k = 0; k < fl; ++k) {
                chain_base[k] = indices[k];
                tuple[k] = base.coords[k].skel(indices[k]);
            }
            FreshPick pick = search_fresh_position(cur.coords, chain_base, *f, family, used,
                                                   search_cap, tuple_desc(n, indices));

            FrontRow row;
            row.stage = n;
            row.indices = indices;
            row.tuple = std::move(tuple);
            row.d = pick.d;
            row.m = Nat(static_cast<unsigned long>(pick.m));
            row.value = pick.value;
            used.insert(row.m);
            out.h0[row.m] = row.value;
            out.rows.push_back(std::move(row));

            for (unsigned k = 0; k < arity; ++k) {
                Bits& g = grafts[k][k < fl ? indices[k] : Bits{}];
                g.insert(g.end(), pick.e_star, 0);
            }
        } while (next_index_tuple(indices));

        out.stage_conditions.push_back(current());
    }

    out.condition = out.stage_conditions.back();

    auto table = std::make_shared<const std::map<Nat, Nat>>(out.h0);
    EDFamily fam = family;
    out.h = [table, fam](const Nat& n) -> Nat {
        auto it = table->find(n);
        if (it != table->end()) return it->second;
        if (fam.members.empty()) return Nat(0);
        Nat best = fam.members[0].fn(n);
        for (std::size_t j = 1; j < fam.members.size() && Nat(j) <= n; ++j) {
            Nat v = fam.members[j].fn(n);
            if (v > best) best = std::move(v);
        }
        return best + 1;
    };
    return out;
}

ProductCatchResult catch_product(unsigned arity, ProductCodePtr f, const EDFamily& family,
                                 unsigned search_cap, unsigned depth) {
    return catch_product_from(full_product(arity), f, family, search_cap, depth);
}

CatchReport verify_product_catch(const ProductCatchResult& result, unsigned arity,
                                 const ProductCode& f, const EDFamily& family, unsigned depth,
                                 unsigned sample_branches, std::uint64_t seed,
                                 unsigned horizon) {
    CatchReport report;

    if (result.arity != arity)
        add_violation(report, "agreement",
                      "result claims arity " + std::to_string(result.arity) + ", expected " +
                          std::to_string(arity));

    // Agreement: recompute f(d)(m) for every processed row and match it
    // against the row, the h0 table and the totalized h.
    std::vector<std::vector<const FrontRow*>> by_stage(depth + 1);
    for (const FrontRow& row : result.rows) {
        if (row.stage == 0 || row.stage > depth) continue;
        by_stage[row.stage].push_back(&row);
        const std::string where = tuple_desc(row.stage, row.indices);
        if (row.d.size() != arity) {
            add_violation(report, "agreement",
                          where + " has a " + std::to_string(row.d.size()) +
                              "-coordinate node tuple");
            continue;
        }
        Word w = f.apply(row.d);
        std::size_t m = nat_to_u64(row.m);
        if (w.size() <= m) {
            add_violation(report, "agreement", where + " output too short for position " +
                                                   row.m.get_str());
            continue;
        }
        if (w[m] != row.value)
            add_violation(report, "agreement", where + " f(d)(" + row.m.get_str() + ") = " +
                                                   w[m].get_str() + " != recorded " +
                                                   row.value.get_str());
        auto it = result.h0.find(row.m);
        if (it == result.h0.end() || it->second != row.value)
            add_violation(report, "agreement",
                          where + " h0 table disagrees at " + row.m.get_str());
        if (result.h(row.m) != row.value)
            add_violation(report, "agreement", where + " h(" + row.m.get_str() + ") = " +
                                                   result.h(row.m).get_str() + " != " +
                                                   row.value.get_str());
    }

    // Freshness of the claimed positions; injectivity of the node tuples.
    {
        std::set<Nat> seen_m;
        std::set<std::vector<Bits>> seen_d;
        for (const FrontRow& row : result.rows) {
            if (row.stage == 0 || row.stage > depth) continue;
            if (!seen_m.insert(row.m).second)
                add_violation(report, "freshness", tuple_desc(row.stage, row.indices) +
                                                       " reuses position " + row.m.get_str());
            if (arity >= 1 && !seen_d.insert(row.d).second)
                add_violation(report, "d-injective", tuple_desc(row.stage, row.indices) +
                                                         " reuses its node tuple");
        }
    }

    // Pointwise avoidance of the family from each member's index on.
    for (unsigned n = 0; n < horizon; ++n) {
        Nat nn(n);
        Nat v = result.h(nn);
        for (std::size_t j = 0; j < family.size() && j <= n; ++j)
            if (family.value(j, nn) == v) {
                add_violation(report, "avoidance", "h(" + std::to_string(n) + ") = " +
                                                       v.get_str() + " = family[" +
                                                       std::to_string(j) + "](" +
                                                       std::to_string(n) + ")");
                break;
            }
    }

    // Sampled branch tuples: per stage, exactly one row's node tuple lies on
    // the branch, and the branch's limit function takes the caught value at
    // that row's position. The limit value comes from one monotone apply on
    // branch prefixes covering the row's tuple, which already reaches the
    // position.
    for (unsigned b = 0; b < sample_branches; ++b) {
        std::vector<BranchBits> xs;
        xs.reserve(arity);
        for (unsigned k = 0; k < arity; ++k)
            xs.push_back(tree_branch(result.condition.coords[k], seed,
                                     static_cast<std::uint64_t>(b) * arity + k));
        for (unsigned n = 1; n <= depth; ++n) {
            const FrontRow* on_branch = nullptr;
            bool unique = true;
            for (const FrontRow* row : by_stage[n]) {
                if (row->d.size() != arity) continue;
                bool below = true;
                for (unsigned k = 0; k < arity && below; ++k)
                    below = branch_prefix(xs[k], row->d[k].size()) == row->d[k];
                if (!below) continue;
                if (on_branch) unique = false;
                else on_branch = row;
            }
            const std::string where = "branch " + std::to_string(b) + " stage " +
                                      std::to_string(n);
            if (!on_branch || !unique) {
                add_violation(report, "branch-cover",
                              where + (on_branch ? " crosses several rows" :
                                                   " crosses no row"));
                continue;
            }
            std::size_t m = nat_to_u64(on_branch->m);
            std::size_t len = 0;
            for (const Bits& dk : on_branch->d) len = std::max(len, dk.size());
            std::vector<Bits> prefixes(arity);
            for (unsigned k = 0; k < arity; ++k) prefixes[k] = branch_prefix(xs[k], len);
            Word w = f.apply(prefixes);
            if (w.size() <= m) {
                add_violation(report, "branch-agreement",
                              where + " limit output too short for position " +
                                  on_branch->m.get_str());
                continue;
            }
            if (w[m] != on_branch->value || result.h(on_branch->m) != w[m])
                add_violation(report, "branch-agreement",
                              where + " limit value " + w[m].get_str() + " at " +
                                  on_branch->m.get_str() + " != h = " +
                                  result.h(on_branch->m).get_str());
        }
    }

    return report;
}

EDFamily greedy_stage_family(const std::vector<std::function<Nat(const Nat&)>>& done,
                             const EDFamily& seed_family) {
    EDFamily fam;
    const std::size_t xi = done.size();
    for (std::size_t i = 0; i < xi; ++i)
        fam.members.push_back({done[i], "stage output h_" + std::to_string(i)});
    for (const auto& m : seed_family.members) fam.members.push_back(m);
    auto seed_cert = seed_family.cert;
    // h_b avoided everything at family slot s of its own stage from index s
    // on; slots were [h_0 .. h_{b-1}] ++ seed members.
    fam.cert = [xi, seed_cert](std::size_t i, std::size_t j) -> Nat {
        std::size_t a = std::min(i, j), b = std::max(i, j);
        if (a == b) return Nat(0);
        if (b < xi) return Nat(static_cast<unsigned long>(a));
        if (a < xi) return Nat(static_cast<unsigned long>(a + (b - xi)));
        return seed_cert(a - xi, b - xi);
    };
    return fam;
}

std::vector<GreedyStage> greedy_med_stage(const std::vector<ProductCodePtr>& codes,
                                          const EDFamily& seed_family, unsigned search_cap,
                                          unsigned depth) {
    std::vector<GreedyStage> out;
    std::vector<std::function<Nat(const Nat&)>> done;
    for (std::size_t xi = 0; xi < codes.size(); ++xi) {
        if (!codes[xi])
            throw InputError("greedy_med_stage: missing code at stage " + std::to_string(xi));
        EDFamily fam = greedy_stage_family(done, seed_family);
        spot_check(fam);
        GreedyStage st;
        try {
            st.result = catch_product(codes[xi]->arity(), codes[xi], fam, search_cap, depth);
        } catch (const SearchCapExhausted& e) {
            throw SearchCapExhausted("stage " + std::to_string(xi) + ": " + e.what(),
                                     e.tuple_desc, e.depth_reached);
        }
        st.h = st.result.h;
        st.condition = st.result.condition;
        done.push_back(st.h);
        out.push_back(std::move(st));
    }
    return out;
}

} // namespace medf
