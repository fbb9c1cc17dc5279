#pragma once

// Regular dag-shaped refutations of GT_n, and the derivations P_pi of the
// clause neg(pi) from GT_{pi,n} for a bipartite partial order pi.
//
// The refutation eliminates the largest remaining element b: for each
// survivor i, the alpha clause of b is chain-resolved against the
// transitivity clauses T_{i,j,b}, turning each literal x_{j,b} into x_{j,i};
// one final resolution against the alpha clause of i yields the alpha clause
// of the shrunken set. Side literals introduced by the P_pi preprocessing
// ride along untouched. Every transitivity orbit of the element set is used
// exactly once, and pivot variables are disjoint across elimination rounds,
// which keeps the dag regular.

#include <functional>

#include "poolres/dag.hpp"
#include "poolres/families.hpp"

namespace poolres {

enum class TransKind : uint8_t { Beta, Gamma };

struct TransUse {
    uint32_t node = 0;  // dag axiom node
    int i = 0, j = 0, k = 0;
    TransKind kind = TransKind::Beta;
};

struct GtDerivation {
    Dag dag;
    std::vector<TransUse> trans_axioms;  // in fixed traversal order
};

enum class JkChoice { Smallest, Largest };

namespace detail {

inline uint32_t add_res_any(Dag& dag, uint32_t a, uint32_t b, Var pivot) {
    if (dag.nodes[a].clause.contains((Lit)pivot)) return dag.add_step(a, b, pivot);
    return dag.add_step(b, a, pivot);
}

// Core elimination loop over the element set `elems` (ascending), starting
// from the given per-element clause nodes.
inline uint32_t eliminate_all(Dag& dag, const OrderVars& ov, std::vector<int> elems,
                              std::map<int, uint32_t> alpha,
                              const std::function<uint32_t(int, int, int)>& trans_axiom) {
    while (elems.size() > 1) {
        int b = elems.back();
        elems.pop_back();
        std::map<int, uint32_t> next;
        for (int i : elems) {
            uint32_t h = alpha.at(b);
            for (int j : elems) {
                if (j == i) continue;
                h = add_res_any(dag, h, trans_axiom(i, j, b), ov.index(j, b));
            }
            next[i] = add_res_any(dag, h, alpha.at(i), ov.index(i, b));
        }
        alpha = std::move(next);
    }
    return alpha.at(elems.front());
}

}  // namespace detail

// Regular refutation of GT_n with conclusion [], built over gen_gt(n)'s
// clause indices. Size is cubic in n, width linear, and all 2*C(n,3)
// transitivity orbits appear as axioms.
inline GtDerivation build_gt_refutation(int n) {
    if (n < 2) throw domain_error("build_gt_refutation needs n >= 2");
    OrderVars ov(n);
    CnfFormula gt = gen_gt(n);
    GtDerivation out;
    std::map<int, uint32_t> alpha;
    std::vector<int> elems;
    for (int i = 0; i < n; ++i) {
        elems.push_back(i);
        alpha[i] = out.dag.add_axiom(gt.clauses[i], (uint32_t)i);
    }
    auto trans = [&](int i, int j, int b) {
        Clause t = transitivity_clause(ov, i, j, b);
        int idx = gt.find_clause(t);
        assert(idx >= 0);
        uint32_t node = out.dag.add_axiom(t, (uint32_t)idx);
        out.trans_axioms.push_back({node, i, j, b, TransKind::Beta});
        return node;
    };
    uint32_t root = detail::eliminate_all(out.dag, ov, elems, alpha, trans);
    out.dag.root = root;
    if (!out.dag.nodes[root].clause.empty())
        throw domain_error("internal: GT refutation did not conclude the empty clause");
    return out;
}

// The derivation P_pi of neg(pi) from GT_{pi,n}. Per minimal element i, the
// literals x_{k,i} for non-minimal k not above i are first resolved away
// against gamma clauses T_{i,J_k,k}, where J_k is a fixed minimal element
// below k; the elimination loop then runs over the minimal set alone,
// carrying the neg(pi) side literals. A custom `trans_axiom` provider lets
// the guarded engine substitute its own axiom handling.
inline GtDerivation build_p_pi(
    const BipartitePartialOrder& pi, int n, JkChoice jk = JkChoice::Smallest,
    const std::function<uint32_t(Dag&, std::vector<TransUse>&, int, int, int, TransKind)>*
        provider = nullptr) {
    OrderVars ov(n);
    CnfFormula gtpi = gt_pi_clauses(pi, n);
    GtDerivation out;
    auto axiom = [&](Dag& dag, std::vector<TransUse>& uses, int i, int j, int k,
                     TransKind kind) -> uint32_t {
        if (provider) return (*provider)(dag, uses, i, j, k, kind);
        Clause t = transitivity_clause(ov, i, j, k);
        int idx = gtpi.find_clause(t);
        assert(idx >= 0);
        uint32_t node = dag.add_axiom(t, (uint32_t)idx);
        uses.push_back({node, i, j, k, kind});
        return node;
    };

    std::map<int, uint32_t> start;
    for (size_t r = 0; r < pi.minimal.size(); ++r) {
        int i = pi.minimal[r];
        uint32_t cur = out.dag.add_axiom(alpha_clause(ov, i), (uint32_t)r);
        for (int k = 0; k < n; ++k) {
            if (pi.is_minimal(k) || pi.less(i, k)) continue;
            int picked = -1;
            for (int j : pi.minimal)  // ascending
                if (pi.less(j, k)) {
                    picked = j;
                    if (jk == JkChoice::Smallest) break;
                }
            if (picked < 0) throw domain_error("internal: non-minimal element with no predecessor");
            uint32_t t = axiom(out.dag, out.trans_axioms, i, picked, k, TransKind::Gamma);
            cur = detail::add_res_any(out.dag, cur, t, ov.index(i, k));
        }
        start[i] = cur;
    }

    auto beta = [&](int i, int j, int b) {
        return axiom(out.dag, out.trans_axioms, i, j, b, TransKind::Beta);
    };
    uint32_t root = detail::eliminate_all(out.dag, ov, pi.minimal, start, beta);
    out.dag.root = root;
    Clause want = neg_pi_clause(pi, ov);
    if (!(out.dag.nodes[root].clause == want))
        throw domain_error("internal: P_pi conclusion differs from neg(pi)");
    return out;
}

// Variables Lemma-style derivations are allowed to resolve on: pairs of
// minimal elements, and pairs (i,k) with i minimal, k non-minimal, i not
// below k.
inline bool p_pi_pivot_allowed(const BipartitePartialOrder& pi, const OrderVars& ov, Var v) {
    auto [a, b] = ov.decode(v);
    bool am = pi.is_minimal(a), bm = pi.is_minimal(b);
    if (am && bm) return true;
    if (am && !bm) return !pi.less(a, b);
    if (!am && bm) return !pi.less(b, a);
    return false;
}

}  // namespace poolres
