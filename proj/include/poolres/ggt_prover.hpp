#pragma once

// Left-to-right construction of pool (regRTL) and regRTI refutations of the
// guarded graph tautologies GGT_n.
//
// The refutation grows from a single unfinished empty clause. Each round
// takes the leftmost unfinished leaf C, reads the bipartite partial order pi
// off its branch, and builds the derivation P_pi of C from GT_{pi,n}. Every
// transitivity axiom T of P_pi is then classified:
//   AlreadyLearned   - T was derived earlier and to the left; use it as a lemma
//   GuardInBranch    - a guard literal occurs on the branch; use the guarded
//                      axiom and let the literal ride down to its absorption
//   GuardFree        - the guard variable is not pivoted below T inside P_pi;
//                      derive T from its guarded pair, learning it
//   Blocked          - the guard variable is pivoted below T and unavailable
// If nothing is blocked, the patched P_pi is converted to tree shape and
// spliced in, finishing the leaf. Otherwise the leaf is rebuilt by a short
// left-branching derivation that learns one blocked clause outright and
// leaves two or three smaller unfinished leaves behind.

#include "poolres/checkers.hpp"
#include "poolres/gt_proofs.hpp"
#include "poolres/lr_tree.hpp"

namespace poolres {

enum class CaseTag : uint8_t { AlreadyLearned, GuardResolvedBelow, GuardFree, Blocked };
enum class ProofMode : uint8_t { Pool, RegRti };

struct GgtStageLog {
    size_t leaf_depth = 0;
    size_t p_pi_size = 0;
    bool expanded = false;        // blocked clause handled by a template
    std::array<int, 4> tags{0, 0, 0, 0};
    size_t unfinished_after = 0;
    size_t learned_after = 0;
};

struct GgtRunLog {
    int n = 0;
    uint64_t seed = 0;
    std::string mode;
    size_t stages = 0;
    size_t expansions = 0;          // blocked-clause rounds
    size_t unfinished_created = 0;  // leaves added by expansions
    size_t learned_total = 0;
    std::vector<GgtStageLog> stage_logs;
};

class GgtProver {
  public:
    GgtProver(int n, const GuardFunctions& guards, ProofMode mode)
        : n_(n), ov_(n), guards_(guards), mode_(mode), formula_(gen_ggt(n, guards)) {
        if (n < 4) throw domain_error("guarded refutations need n >= 4");
    }

    const CnfFormula& formula() const { return formula_; }
    const GgtRunLog& log() const { return log_; }

    Proof refute() {
        uint32_t start = tree_.make_unfinished(Clause());
        tree_.root = start;
        tree_.nodes[start].depth = 0;
        worklist_.push_back(start);
        size_t checkpoint = 1;
        const size_t stage_bound = 1 + 8 * (size_t)choose3(n_);
        while (!worklist_.empty()) {
            if (log_.stages++ > stage_bound)
                throw domain_error("stage bound exceeded; construction diverged");
            uint32_t leaf = worklist_.back();
            worklist_.pop_back();
            stage(leaf);
            if (log_.stages == checkpoint) {
                tree_.validate(formula_.num_vars);
                checkpoint *= 2;
            }
        }
        if (log_.expansions > 2 * (size_t)choose3(n_))
            throw domain_error("more blocked-clause expansions than learnable clauses");
        tree_.validate(formula_.num_vars);
        return tree_.finalize();
    }

  private:
    int n_;
    OrderVars ov_;
    const GuardFunctions& guards_;
    ProofMode mode_;
    CnfFormula formula_;
    LRTree tree_;
    std::vector<uint32_t> worklist_;              // back = leftmost
    std::map<std::array<int, 3>, uint32_t> learned_;  // orbit -> tree node
    GgtRunLog log_;

    static int64_t choose3(int n) { return (int64_t)n * (n - 1) * (n - 2) / 6; }

    void learn(int i, int j, int k, uint32_t node) {
        auto rep = orbit_rep(i, j, k);
        auto it = learned_.find(rep);
        if (it == learned_.end()) {
            learned_.emplace(rep, node);
            ++log_.learned_total;
        } else if (tree_.post_less(node, it->second)) {
            it->second = node;
        }
    }

    // ---- per-stage work --------------------------------------------------

    void stage(uint32_t leaf) {
        GgtStageLog slog;
        slog.leaf_depth = tree_.nodes[leaf].depth;

        LRTree::BranchInfo branch = tree_.branch_info(leaf);
        PartialSpec tau(n_, {});
        for (Lit l : branch.cplus) {
            auto [a, b] = ov_.decode(var_of(l));
            if (positive(l))
                tau.pairs.emplace(b, a);  // x_{a,b} = complement of x_{b,a}
            else
                tau.pairs.emplace(a, b);
        }
        BipartitePartialOrder pi = associated_bpo(tau);
        if (!(tree_.nodes[leaf].clause == neg_pi_clause(pi, ov_)))
            throw domain_error("unfinished leaf clause is not the negated bipartite order");

        GtDerivation ppi = build_p_pi(pi, n_);
        slog.p_pi_size = ppi.dag.size();
        auto below = pivots_below(ppi.dag, ov_.count());

        std::vector<CaseTag> tags(ppi.trans_axioms.size());
        int first_blocked = -1;
        for (size_t t = 0; t < ppi.trans_axioms.size(); ++t) {
            tags[t] = classify(ppi.trans_axioms[t], leaf, branch, below);
            ++slog.tags[(int)tags[t]];
            if (tags[t] == CaseTag::Blocked && first_blocked < 0) first_blocked = (int)t;
        }

        if (first_blocked >= 0) {
            slog.expanded = true;
            expand_blocked(leaf, pi, ppi.trans_axioms[first_blocked]);
            ++log_.expansions;
        } else {
            patch_and_splice(leaf, pi, ppi, tags, branch);
        }
        slog.unfinished_after = worklist_.size();
        slog.learned_after = learned_.size();
        log_.stage_logs.push_back(slog);
    }

    CaseTag classify(const TransUse& t, uint32_t leaf, const LRTree::BranchInfo& branch,
                     const std::vector<VarSet>& below) const {
        auto rep = orbit_rep(t.i, t.j, t.k);
        auto it = learned_.find(rep);
        if (it != learned_.end() && tree_.post_less(it->second, leaf))
            return CaseTag::AlreadyLearned;
        Var g = var_of(guards_.guard_lit(ov_, t.i, t.j, t.k));
        if (branch.nearest.count(g)) return CaseTag::GuardResolvedBelow;
        if (!below[t.node].contains(g)) return CaseTag::GuardFree;
        return CaseTag::Blocked;
    }

    // ---- success path ----------------------------------------------------

    void patch_and_splice(uint32_t leaf, const BipartitePartialOrder& pi, GtDerivation& ppi,
                          const std::vector<CaseTag>& tags, const LRTree::BranchInfo& branch) {
        Dag& dag = ppi.dag;
        // alpha axioms arrive indexed by rank into GT_{pi,n}; the spliced
        // tree references the guarded formula, where alpha of element i is
        // clause i
        std::vector<bool> is_trans(dag.size(), false);
        for (const TransUse& use : ppi.trans_axioms) is_trans[use.node] = true;
        for (uint32_t id = 0; id < dag.size(); ++id) {
            DagNode& node = dag.nodes[id];
            if (node.kind == DagNode::Kind::Axiom && !is_trans[id])
                node.axiom_index = (uint32_t)pi.minimal.at(node.axiom_index);
        }
        std::vector<std::pair<uint32_t, TransUse>> learned_steps;  // dag node -> triple
        for (size_t t = 0; t < ppi.trans_axioms.size(); ++t) {
            const TransUse& use = ppi.trans_axioms[t];
            DagNode& node = dag.nodes[use.node];
            Lit g = guards_.guard_lit(ov_, use.i, use.j, use.k);
            switch (tags[t]) {
                case CaseTag::AlreadyLearned: {
                    node.kind = DagNode::Kind::External;
                    node.external = learned_.at(orbit_rep(use.i, use.j, use.k));
                    break;
                }
                case CaseTag::GuardResolvedBelow: {
                    Lit present = branch.nearest.at(var_of(g));
                    auto [pos_idx, neg_idx] = ggt_pair_indices(n_, use.i, use.j, use.k);
                    node.axiom_index = present == g ? (uint32_t)pos_idx : (uint32_t)neg_idx;
                    auto lits = node.clause.lits();
                    lits.push_back(present);
                    node.clause = Clause::from_lits(std::move(lits));
                    break;
                }
                case CaseTag::GuardFree: {
                    auto [pos_idx, neg_idx] = ggt_pair_indices(n_, use.i, use.j, use.k);
                    Clause t_clause = node.clause;
                    auto pos_lits = t_clause.lits();
                    pos_lits.push_back(g);
                    auto neg_lits = t_clause.lits();
                    neg_lits.push_back(-g);
                    uint32_t pa = dag.add_axiom(Clause::from_lits(std::move(pos_lits)),
                                                (uint32_t)pos_idx);
                    uint32_t na = dag.add_axiom(Clause::from_lits(std::move(neg_lits)),
                                                (uint32_t)neg_idx);
                    DagNode& nd = dag.nodes[use.node];  // re-fetch after growth
                    nd.kind = DagNode::Kind::Step;
                    nd.left = pa;
                    nd.right = na;
                    nd.pivot = var_of(g);
                    learned_steps.push_back({use.node, use});
                    break;
                }
                case CaseTag::Blocked: throw domain_error("internal: blocked clause in patch");
            }
        }
        // Guard literals introduced above ride down to the conclusion by
        // plain re-derivation; set unions absorb them where already present.
        recompute_steps(dag);

        Clause conclusion = dag.nodes[dag.root].clause;
        std::vector<Lit> extras;
        for (Lit l : conclusion.lits())
            if (!tree_.nodes[leaf].clause.contains(l)) extras.push_back(l);

        std::map<uint32_t, uint32_t> first_emitted;  // dag step node -> tree node
        LRTreeEmitter em{tree_, nullptr};
        StepEmitHook hook = [&](uint32_t dag_node, uint64_t handle) {
            first_emitted.emplace(dag_node, (uint32_t)handle);
        };
        Emitted root = mode_ == ProofMode::Pool
                           ? dag_to_tree_pool(dag, em, hook)
                           : dag_to_tree_input_lemmas(dag, ov_.count(), em, hook);
        uint32_t sub = (uint32_t)root.handle;
        tree_.splice(leaf, sub);
        for (auto& [dn, use] : learned_steps) {
            auto it = first_emitted.find(dn);
            if (it == first_emitted.end())
                throw domain_error("internal: learned step was never emitted");
            uint32_t where = it->second == sub ? leaf : it->second;
            learn(use.i, use.j, use.k, where);
        }
        for (Lit l : extras) {
            bool in_branch = false;
            for (Lit b : branch.cplus)
                if (b == l) in_branch = true;
            if (!in_branch)
                throw domain_error("conclusion literal outside the branch closure");
            tree_.thread_down(leaf, l);
        }
    }

    // ---- blocked-clause templates -----------------------------------------

    struct InteriorT {
        uint32_t node;
        int i, j, k;
    };
    struct ChainStep {
        int i, j, k;  // interior transitivity triple
        Var pivot;
    };

    uint32_t make_virtual_t(int i, int j, int k, std::vector<InteriorT>& interiors) {
        uint32_t v = tree_.make_axiom(kNoNode, transitivity_clause(ov_, i, j, k));
        interiors.push_back({v, i, j, k});
        return v;
    }

    // A replacement chain: the unfinished leaf on top, one interior
    // transitivity inference per step going down.
    uint32_t build_chain(const Clause& top, const std::vector<ChainStep>& steps,
                         std::vector<InteriorT>& interiors, uint32_t& leaf_out) {
        leaf_out = tree_.make_unfinished(top);
        uint32_t cur = leaf_out;
        for (const ChainStep& s : steps)
            cur = tree_.make_step(make_virtual_t(s.i, s.j, s.k, interiors), cur, s.pivot);
        return cur;
    }

    uint32_t learn_pair_node(int i, int j, int k) {
        auto [pos_idx, neg_idx] = ggt_pair_indices(n_, i, j, k);
        Lit g = guards_.guard_lit(ov_, i, j, k);
        Clause t = transitivity_clause(ov_, i, j, k);
        auto pos_lits = t.lits();
        pos_lits.push_back(g);
        auto neg_lits = t.lits();
        neg_lits.push_back(-g);
        uint32_t pa = tree_.make_axiom((uint32_t)pos_idx, Clause::from_lits(std::move(pos_lits)));
        uint32_t na = tree_.make_axiom((uint32_t)neg_idx, Clause::from_lits(std::move(neg_lits)));
        return tree_.make_step(pa, na, var_of(g));
    }

    // Demote `lo`: every pair (lo, x) moves to (hi, x), plus the new pair
    // (hi, lo). This is the bipartite order associated with the branch after
    // the literal asserting hi before lo is added.
    BipartitePartialOrder demote(const BipartitePartialOrder& pi, int lo, int hi) const {
        PairSet pairs;
        for (auto [a, b] : pi.pairs)
            if (a != lo) pairs.emplace(a, b);
        pairs.emplace(hi, lo);
        for (auto [a, b] : pi.pairs)
            if (a == lo) pairs.emplace(hi, b);
        return BipartitePartialOrder::from_pairs(n_, std::move(pairs));
    }

    void expand_blocked(uint32_t leaf, const BipartitePartialOrder& pi, const TransUse& t) {
        std::vector<InteriorT> interiors;
        std::vector<uint32_t> new_leaves;  // left to right
        uint32_t tl = learn_pair_node(t.i, t.j, t.k);
        int i = t.i, j = t.j, k = t.k;
        uint32_t cnode;
        if (t.kind == TransKind::Gamma) {
            // S1: the branch that asserts i before j
            BipartitePartialOrder pi1 = demote(pi, j, i);
            std::vector<ChainStep> s1;
            for (int l = 0; l < n_; ++l)
                if (l != k && pi.less(j, l) && !pi.less(i, l))
                    s1.push_back({i, j, l, ov_.index(i, l)});
            uint32_t leaf1;
            uint32_t s1_bottom = build_chain(neg_pi_clause(pi1, ov_), s1, interiors, leaf1);
            uint32_t c1minus = tree_.make_step(tl, s1_bottom, ov_.index(i, k));
            // S2: the branch that asserts j before i
            BipartitePartialOrder pi2 = demote(pi, i, j);
            std::vector<ChainStep> s2;
            for (int l = 0; l < n_; ++l)
                if (pi.less(i, l) && !pi.less(j, l)) s2.push_back({j, i, l, ov_.index(j, l)});
            uint32_t leaf2;
            uint32_t s2_bottom = build_chain(neg_pi_clause(pi2, ov_), s2, interiors, leaf2);
            cnode = tree_.make_step(c1minus, s2_bottom, ov_.index(i, j));
            new_leaves = {leaf1, leaf2};
        } else {
            // S3: both j and k end up above i
            PairSet p3;
            for (auto [a, b] : pi.pairs)
                if (a != j && a != k) p3.emplace(a, b);
            p3.emplace(i, j);
            p3.emplace(i, k);
            for (auto [a, b] : pi.pairs)
                if (a == j || a == k) p3.emplace(i, b);
            auto pi3 = BipartitePartialOrder::from_pairs(n_, std::move(p3));
            std::vector<ChainStep> s3;
            for (int l = 0; l < n_; ++l) {
                if (pi.less(i, l) || !(pi.less(j, l) || pi.less(k, l))) continue;
                if (pi.less(j, l))
                    s3.push_back({i, j, l, ov_.index(i, l)});
                else
                    s3.push_back({i, k, l, ov_.index(i, l)});
            }
            uint32_t leaf3;
            uint32_t s3_bottom = build_chain(neg_pi_clause(pi3, ov_), s3, interiors, leaf3);
            uint32_t n1 = tree_.make_step(tl, s3_bottom, ov_.index(i, k));

            // S4: j above both i and k
            PairSet p4;
            for (auto [a, b] : pi.pairs)
                if (a != j) p4.emplace(a, b);
            p4.emplace(i, j);
            p4.emplace(k, j);
            for (auto [a, b] : pi.pairs)
                if (a == j) {
                    p4.emplace(i, b);
                    p4.emplace(k, b);
                }
            auto pi4 = BipartitePartialOrder::from_pairs(n_, std::move(p4));
            std::vector<ChainStep> s4;
            for (int l = 0; l < n_; ++l) {
                if (!pi.less(j, l)) continue;
                bool il = pi.less(i, l), kl = pi.less(k, l);
                if (kl && !il) {
                    s4.push_back({i, j, l, ov_.index(i, l)});
                } else if (il && !kl) {
                    s4.push_back({k, j, l, ov_.index(k, l)});
                } else if (!il && !kl) {
                    s4.push_back({k, j, l, ov_.index(k, l)});
                    s4.push_back({i, j, l, ov_.index(i, l)});
                }
            }
            uint32_t leaf4;
            uint32_t s4_bottom = build_chain(neg_pi_clause(pi4, ov_), s4, interiors, leaf4);
            uint32_t n2 = tree_.make_step(n1, s4_bottom, ov_.index(j, k));

            // S5: j above i, as in S2 but without the k literal
            BipartitePartialOrder pi5 = demote(pi, i, j);
            std::vector<ChainStep> s5;
            for (int l = 0; l < n_; ++l)
                if (pi.less(i, l) && !pi.less(j, l)) s5.push_back({j, i, l, ov_.index(j, l)});
            uint32_t leaf5;
            uint32_t s5_bottom = build_chain(neg_pi_clause(pi5, ov_), s5, interiors, leaf5);
            cnode = tree_.make_step(n2, s5_bottom, ov_.index(i, j));
            new_leaves = {leaf3, leaf4, leaf5};
        }
        if (!(tree_.nodes[cnode].clause == tree_.nodes[leaf].clause))
            throw domain_error("replacement derivation concludes the wrong clause");
        tree_.splice(leaf, cnode);
        learn(i, j, k, tl);
        for (const InteriorT& it : interiors) patch_interior(it);
        log_.unfinished_created += new_leaves.size();
        for (auto rit = new_leaves.rbegin(); rit != new_leaves.rend(); ++rit) {
            assert_condition_e(*rit);
            worklist_.push_back(*rit);
        }
    }

    // Interior transitivity clauses inside the replacement chains: already
    // learned ones become lemmas; otherwise the branch below decides whether
    // a guard literal is available for absorption or the clause can be
    // derived fresh from its guarded pair. A blocked interior clause cannot
    // arise: a pivot on the guard variable below this position would put a
    // guard literal on the branch first.
    void patch_interior(const InteriorT& it) {
        auto rep = orbit_rep(it.i, it.j, it.k);
        auto entry = learned_.find(rep);
        if (entry != learned_.end() && tree_.post_less(entry->second, it.node)) {
            LRNode& v = tree_.nodes[it.node];
            v.kind = NodeKind::Lemma;
            v.a = entry->second;
            return;
        }
        Lit g = guards_.guard_lit(ov_, it.i, it.j, it.k);
        Lit found = 0;
        for (uint32_t q = tree_.nodes[it.node].parent; q != kNoNode; q = tree_.nodes[q].parent) {
            if (tree_.nodes[q].clause.contains(g)) {
                found = g;
                break;
            }
            if (tree_.nodes[q].clause.contains(-g)) {
                found = -g;
                break;
            }
        }
        auto [pos_idx, neg_idx] = ggt_pair_indices(n_, it.i, it.j, it.k);
        if (found != 0) {
            LRNode& v = tree_.nodes[it.node];
            v.a = found == g ? (uint32_t)pos_idx : (uint32_t)neg_idx;
            auto lits = v.clause.lits();
            lits.push_back(found);
            v.clause = Clause::from_lits(std::move(lits));
            tree_.thread_down(it.node, found);
        } else {
            Clause tcl = tree_.nodes[it.node].clause;
            auto pos_lits = tcl.lits();
            pos_lits.push_back(g);
            auto neg_lits = tcl.lits();
            neg_lits.push_back(-g);
            uint32_t pa =
                tree_.make_axiom((uint32_t)pos_idx, Clause::from_lits(std::move(pos_lits)));
            uint32_t na =
                tree_.make_axiom((uint32_t)neg_idx, Clause::from_lits(std::move(neg_lits)));
            LRNode& v = tree_.nodes[it.node];
            v.kind = NodeKind::Step;
            v.a = pa;
            v.b = na;
            v.pivot = var_of(g);
            tree_.nodes[pa].parent = it.node;
            tree_.nodes[pa].side = 0;
            tree_.nodes[pa].depth = v.depth + 1;
            tree_.nodes[na].parent = it.node;
            tree_.nodes[na].side = 1;
            tree_.nodes[na].depth = v.depth + 1;
            learn(it.i, it.j, it.k, it.node);
        }
    }

    void assert_condition_e(uint32_t leaf) {
        LRTree::BranchInfo branch = tree_.branch_info(leaf);
        PartialSpec tau(n_, {});
        for (Lit l : branch.cplus) {
            auto [a, b] = ov_.decode(var_of(l));
            if (positive(l))
                tau.pairs.emplace(b, a);
            else
                tau.pairs.emplace(a, b);
        }
        BipartitePartialOrder pi = associated_bpo(tau);
        if (!(tree_.nodes[leaf].clause == neg_pi_clause(pi, ov_)))
            throw domain_error("new unfinished leaf violates the bipartite-order condition");
    }

    void recompute_steps(Dag& dag) {
        for (uint32_t id = 0; id < dag.size(); ++id) {
            DagNode& n = dag.nodes[id];
            if (n.kind == DagNode::Kind::Step)
                n.clause = resolve_any(dag.nodes[n.left].clause, dag.nodes[n.right].clause,
                                       n.pivot);
        }
    }
};

// Pool (regRTL) refutation of GGT_n.
inline Proof refute_ggt(int n, const GuardFunctions& guards, GgtRunLog* log = nullptr) {
    GgtProver prover(n, guards, ProofMode::Pool);
    Proof p = prover.refute();
    if (log) *log = prover.log();
    return p;
}

// Tree-like regular refutation with input lemmas of GGT_n.
inline Proof refute_ggt_regrti(int n, const GuardFunctions& guards, GgtRunLog* log = nullptr) {
    GgtProver prover(n, guards, ProofMode::RegRti);
    Proof p = prover.refute();
    if (log) *log = prover.log();
    return p;
}

}  // namespace poolres
