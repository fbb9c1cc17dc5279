#pragma once

// Building blocks for resolution over xor-lifted pebbling clauses: the
// complete block tree refuting the two translations of a variable, its
// side-clause generalization, and the regular derivations of lifted vertex
// clauses over a subgraph by depth-first elimination.

#include "poolres/dag.hpp"
#include "poolres/pebbling.hpp"

namespace poolres {

// Complete binary resolution tree over the block variables of vertex z.
// Leaves are indexed by sign masks; `leaf(mask)` supplies the leaf node and
// `step(l, r, var)` the inferences. Level d (1-based from the leaves)
// resolves on x_{z,d}. When `leftmost_mask` is non-negative, the leaf with
// that mask becomes the leftmost leaf of the tree.
template <class LeafFn, class StepFn>
uint32_t xor_block_tree(const XorVars& xv, int z, int leftmost_mask, LeafFn&& leaf,
                        StepFn&& step) {
    auto rec = [&](auto&& self, int d, uint32_t suffix) -> uint32_t {
        if (d == 0) return leaf(suffix);
        uint32_t bit = 1u << (d - 1);
        bool one_first = leftmost_mask >= 0 && (((uint32_t)leftmost_mask & bit) != 0);
        uint32_t first = suffix | (one_first ? bit : 0);
        uint32_t second = suffix | (one_first ? 0 : bit);
        uint32_t l = self(self, d - 1, first);
        uint32_t r = self(self, d - 1, second);
        return step(l, r, xv.index(z, d));
    };
    return rec(rec, xv.k(), 0);
}

// The refutation of x_u^{k xor} together with its dual: 2^k - 1 inferences
// of height k, resolving on exactly the block variables. Axiom indices are
// positions in the formula listing x_u^{k xor} first, then the dual, in
// mask order.
inline Dag xor_contra(const XorVars& xv, int u) {
    Dag d;
    std::vector<uint32_t> pos_at, neg_at;
    for (uint32_t m = 0; m < (1u << xv.k()); ++m)
        (odd_parity(m) ? neg_at : pos_at).push_back(m);
    auto index_of = [&](uint32_t mask) {
        const auto& fam = odd_parity(mask) ? neg_at : pos_at;
        uint32_t base = odd_parity(mask) ? (uint32_t)pos_at.size() : 0;
        for (uint32_t i = 0; i < fam.size(); ++i)
            if (fam[i] == mask) return base + i;
        throw domain_error("mask out of range");
    };
    d.root = xor_block_tree(
        xv, u, -1,
        [&](uint32_t mask) { return d.add_axiom(xor_block_clause(xv, u, mask), index_of(mask)); },
        [&](uint32_t l, uint32_t r, Var v) { return d.add_step(l, r, v); });
    return d;
}

// The formula xor_contra's axiom indices refer to.
inline CnfFormula xor_contra_formula(const XorVars& xv, int u) {
    CnfFormula f;
    f.num_vars = xv.count();
    for (Clause& c : xorify_pos(xv, u)) f.add_clause(std::move(c));
    for (Clause& c : xorify_neg(xv, u)) f.add_clause(std::move(c));
    return f;
}

namespace detail {
inline Clause merge_clauses(const Clause& a, const Clause& b) {
    std::vector<Lit> lits = a.lits();
    for (Lit l : b.lits()) lits.push_back(l);
    return Clause::from_lits(std::move(lits));
}
}  // namespace detail

// Derivation of a target clause of (c v d)^{k xor} from the translations of
// c v x_u and d v ~x_u: the block tree over u with the target's c-part added
// to the even leaves and its d-part to the odd leaves. The axiom callback
// receives the full leaf clause and its parity.
template <class AxiomFn>
uint32_t xor_step_tree(Dag& dag, const XorVars& xv, int u, const Clause& target_c_part,
                       const Clause& target_d_part, int leftmost_mask, AxiomFn&& axiom) {
    return xor_block_tree(
        xv, u, leftmost_mask,
        [&](uint32_t mask) {
            const Clause& side = odd_parity(mask) ? target_d_part : target_c_part;
            Clause leaf = detail::merge_clauses(side, xor_block_clause(xv, u, mask));
            return axiom(mask, leaf);
        },
        [&](uint32_t l, uint32_t r, Var v) { return dag.add_step(l, r, v); });
}

// Lemma-6 form packaged over an explicit formula: derives `target`, a member
// of (c v d)^{k xor}, from the lifted clauses of c v x_u and d v ~x_u.
inline Dag xor_step(const CnfFormula& f, const XorVars& xv, const std::vector<Lit>& c,
                    const std::vector<Lit>& d, int u, const Clause& target) {
    // split the target into its c-part and d-part
    auto part_of = [&](const std::vector<Lit>& vs) {
        std::vector<Lit> lits;
        for (Lit l : target.lits())
            for (Lit z : vs)
                if (xv.vertex_of(var_of(l)) == (int)var_of(z) - 1) lits.push_back(l);
        return Clause::from_lits(std::move(lits));
    };
    Clause ec = part_of(c), ed = part_of(d);
    if (!(detail::merge_clauses(ec, ed) == target))
        throw domain_error("target is not a translation of the resolvent");
    Dag dag;
    dag.root = xor_step_tree(dag, xv, u, ec, ed, -1, [&](uint32_t, const Clause& leaf) {
        int idx = f.find_clause(leaf);
        if (idx < 0) throw domain_error("leaf clause missing from the premise formula");
        return dag.add_axiom(leaf, (uint32_t)idx);
    });
    return dag;
}

// Lemma-7 form: derive a target of x_w^{k xor} from x_u^{k xor}, x_v^{k xor}
// and the lifted implication, eliminating u inside and v outside. Fewer than
// 2^{2k} inferences; paths into the x_v leaves resolve on block variables of
// v only.
inline Dag xor_uv_implies_w(const CnfFormula& f, const XorVars& xv, int u, int v, int w,
                            const Clause& target) {
    Dag dag;
    auto axiom = [&](const Clause& c) {
        int idx = f.find_clause(c);
        if (idx < 0) throw domain_error("expected premise missing from the formula");
        return dag.add_axiom(c, (uint32_t)idx);
    };
    dag.root = xor_block_tree(
        xv, v, -1,
        [&](uint32_t vmask) -> uint32_t {
            Clause vblock = xor_block_clause(xv, v, vmask);
            if (!odd_parity(vmask)) return axiom(vblock);
            // derive target v ~v-block from the implication lifts and x_u
            Clause carry = detail::merge_clauses(target, vblock);
            return xor_block_tree(
                xv, u, -1,
                [&](uint32_t umask) -> uint32_t {
                    Clause ublock = xor_block_clause(xv, u, umask);
                    if (!odd_parity(umask)) return axiom(ublock);
                    return axiom(detail::merge_clauses(carry, ublock));
                },
                [&](uint32_t l, uint32_t r, Var pv) { return dag.add_step(l, r, pv); });
        },
        [&](uint32_t l, uint32_t r, Var pv) { return dag.add_step(l, r, pv); });
    return dag;
}

// --- Lemma-8 derivations over a subgraph --------------------------------

// A derivation target: the block instance of the subgraph sink to derive,
// plus the carried (cut-vertex) block instances that ride along underneath.
struct XorPebGoal {
    int w = 0;
    uint32_t w_mask = 0;                 // even parity
    std::map<int, uint32_t> carried;     // cut vertex -> odd-parity mask
};

struct XorPebDerivation {
    Dag dag;
    std::vector<uint32_t> axiom_nodes;  // dag nodes whose axiom_index is a
                                        // position in gen_peb_xor's clause list
};

// Regular dag derivation of the goal instance from the alpha/beta lifts of
// the subgraph: vertices are eliminated depth-first, each vertex deriving
// all block instances it can feed upward, so the result is shared across
// consumers. Resolution variables are block variables of subgraph vertices
// other than the sink and the cut vertices.
inline XorPebDerivation reg_xor_peb_derivation(const PointedDag& g, int k, const SubDag& h,
                                               const XorPebGoal& goal) {
    XorVars xv(g.n(), k);
    CnfFormula peb_xor = gen_peb_xor(g, k);
    XorPebDerivation out;
    Dag& dag = out.dag;
    auto axiom = [&](const Clause& c) {
        int idx = peb_xor.find_clause(c);
        if (idx < 0) throw domain_error("derivation leaf missing from the lifted formula");
        uint32_t node = dag.add_axiom(c, (uint32_t)idx);
        out.axiom_nodes.push_back(node);
        return node;
    };
    for (auto& [cv, mask] : goal.carried) {
        if (!h.contains(cv) || !h.cut[cv])
            throw domain_error("carried vertex is not a cut leaf of the subgraph");
        if (!odd_parity(mask)) throw domain_error("carried block must be a negative translation");
    }
    if (odd_parity(goal.w_mask)) throw domain_error("goal block must be a positive translation");

    // Reachability along the subgraph's own edges: cut vertices have no
    // incoming edges, so paths may leave one but never enter one.
    auto reaches_in_h = [&](int from, int to) {
        if (from == to) return true;
        std::vector<bool> seen(g.n(), false);
        std::vector<int> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int s : g.succs(x)) {
                if (!h.contains(s) || h.cut[s] || seen[s]) continue;
                if (s == to) return true;
                seen[s] = true;
                stack.push_back(s);
            }
        }
        return false;
    };

    // fixed side clause under vertex z: the carried blocks of cut vertices
    // that can feed z inside the subgraph
    auto fixed_under = [&](int z) {
        std::vector<Lit> lits;
        for (auto& [cv, mask] : goal.carried)
            if (reaches_in_h(cv, z)) {
                Clause block = xor_block_clause(xv, cv, mask);
                for (Lit l : block.lits()) lits.push_back(l);
            }
        return Clause::from_lits(std::move(lits));
    };

    std::map<std::pair<int, uint32_t>, uint32_t> memo;  // (vertex, mask) -> node
    auto instance = [&](auto&& self, int z, uint32_t zmask) -> uint32_t {
        if (goal.carried.count(z))
            throw domain_error("internal: asked for an instance of a carried vertex");
        auto key = std::make_pair(z, zmask);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Clause zblock = xor_block_clause(xv, z, zmask);
        uint32_t node;
        if (h.source_here(z)) {
            if (!h.base->is_source(z) && h.cut[z])
                throw domain_error("internal: cut vertex instance requested");
            node = axiom(zblock);
        } else {
            auto [a, b] = h.preds_here(z);
            Clause fixed_z = fixed_under(z);
            Clause carry = detail::merge_clauses(fixed_z, zblock);
            bool a_cut = goal.carried.count(a) != 0, b_cut = goal.carried.count(b) != 0;
            auto beta_axiom = [&](uint32_t amask, uint32_t bmask) {
                Clause c = detail::merge_clauses(
                    detail::merge_clauses(xor_block_clause(xv, a, amask),
                                          xor_block_clause(xv, b, bmask)),
                    zblock);
                return axiom(c);
            };
            auto eliminate_a = [&](uint32_t bmask) -> uint32_t {
                if (a_cut) return beta_axiom(goal.carried.at(a), bmask);
                return xor_block_tree(
                    xv, a, -1,
                    [&](uint32_t amask) -> uint32_t {
                        if (!odd_parity(amask)) return self(self, a, amask);
                        return beta_axiom(amask, bmask);
                    },
                    [&](uint32_t l, uint32_t r, Var pv) { return dag.add_step(l, r, pv); });
            };
            if (b_cut) {
                node = eliminate_a(goal.carried.at(b));
            } else {
                node = xor_block_tree(
                    xv, b, -1,
                    [&](uint32_t bmask) -> uint32_t {
                        if (!odd_parity(bmask)) return self(self, b, bmask);
                        return eliminate_a(bmask);
                    },
                    [&](uint32_t l, uint32_t r, Var pv) { return dag.add_step(l, r, pv); });
            }
            if (!(dag.nodes[node].clause == carry)) {
                std::string msg = "internal: vertex instance derived the wrong clause: z=" +
                                  std::to_string(z) + " got[";
                for (Lit l : dag.nodes[node].clause.lits()) msg += std::to_string(l) + " ";
                msg += "] want[";
                for (Lit l : carry.lits()) msg += std::to_string(l) + " ";
                msg += "]";
                throw domain_error(msg);
            }
        }
        memo.emplace(key, node);
        return node;
    };
    out.dag.root = instance(instance, goal.w, goal.w_mask);
    return out;
}

}  // namespace poolres
