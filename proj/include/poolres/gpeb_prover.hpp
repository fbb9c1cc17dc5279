#pragma once

// Left-to-right construction of regRTI refutations of the guarded xor-lifted
// pebbling formulas GPeb.
//
// Unfinished leaves carry a lifted clause made of one positive block (the
// sink instance W over a vertex w) and a set of negative cut blocks; the
// small shapes — W alone, ~U v W with u an ancestor of w, ~U v ~V v W with
// u, v independent ancestors of w — are the common case, but deeper cut sets
// arise on graphs where a cut vertex keeps alternate routes into a
// replacement subgraph. A leaf is finished by the subgraph derivation of its
// clause, with every derivation leaf D classified against the guard map.
// When some D is blocked (its guard variable is resolved below it), the
// derivation is dropped and a short template learns D from its guarded pair,
// leaving fewer than 2^{4k} smaller unfinished leaves. The template carries,
// under every piece, exactly the branch-known blocks that survive into that
// piece's subgraph, which keeps every new leaf's branch clean of its
// protected vertices.

#include "poolres/checkers.hpp"
#include "poolres/lr_tree.hpp"
#include "poolres/xor_lemmas.hpp"

namespace poolres {

struct GpebRunLog {
    int n = 0, k = 0;
    uint64_t seed = 0;
    size_t stages = 0;
    size_t expansions = 0;
    size_t unfinished_created = 0;
    size_t max_new_leaves_per_expansion = 0;
    size_t learned_total = 0;
    size_t general_templates = 0;  // expansions that needed the fallback shape
};

class GpebProver {
  public:
    GpebProver(const PointedDag& g, int k, const GuardMap& rho)
        : g_(g),
          k_(k),
          rho_(rho),
          xv_(g.n(), k),
          peb_xor_(gen_peb_xor(g, k)),
          gpeb_(gen_gpeb(g, k, rho)) {}

    const CnfFormula& formula() const { return gpeb_; }
    const GpebRunLog& log() const { return log_; }

    Proof refute() {
        build_initial();
        size_t checkpoint = 1;
        const size_t stage_bound =
            2 + peb_xor_.clauses.size() * ((size_t)1 << (4 * k_)) + worklist_.size();
        while (!worklist_.empty()) {
            if (log_.stages++ > stage_bound)
                throw domain_error("stage bound exceeded; construction diverged");
            uint32_t leaf = worklist_.back();
            worklist_.pop_back();
            stage(leaf);
            if (log_.stages == checkpoint) {
                tree_.validate(gpeb_.num_vars);
                checkpoint *= 2;
            }
        }
        if (log_.expansions > peb_xor_.clauses.size())
            throw domain_error("more expansions than learnable clauses");
        tree_.validate(gpeb_.num_vars);
        return tree_.finalize();
    }

  private:
    const PointedDag& g_;
    int k_;
    GuardMap rho_;
    XorVars xv_;
    CnfFormula peb_xor_, gpeb_;
    LRTree tree_;
    std::vector<uint32_t> worklist_;
    std::map<uint32_t, uint32_t> learned_;  // lifted clause index -> tree node
    struct LeafAnn {
        std::vector<std::pair<int, uint32_t>> cuts;  // vertex -> odd mask
        int w = -1;
        uint32_t wmask = 0;
        int cut_vertex_or(ked_default) const = delete;  // placeholder removed
    };
    std::map<uint32_t, LeafAnn> ann_;
    GpebRunLog log_;

    // ---- plumbing ---------------------------------------------------------

    int peb_xor_index(const Clause& c) const {
        int idx = peb_xor_.find_clause(c);
        if (idx < 0) throw domain_error("internal: clause is not a lifted pebbling clause");
        return idx;
    }

    void learn(uint32_t peb_idx, uint32_t node) {
        auto it = learned_.find(peb_idx);
        if (it == learned_.end()) {
            learned_.emplace(peb_idx, node);
            ++log_.learned_total;
        } else if (tree_.post_less(node, it->second)) {
            it->second = node;
        }
    }

    uint32_t axiom_or_pair(uint32_t peb_idx, bool* learned_now = nullptr) {
        const Clause& d = peb_xor_.clauses[peb_idx];
        auto [pos, neg] = gpeb_clause_indices(rho_, peb_idx);
        if (rho_.guard[peb_idx] == 0) {
            if (learned_now) *learned_now = false;
            return tree_.make_axiom((uint32_t)pos, d);
        }
        Lit y = (Lit)rho_.guard[peb_idx];
        auto pos_lits = d.lits();
        pos_lits.push_back(y);
        auto neg_lits = d.lits();
        neg_lits.push_back(-y);
        uint32_t pa = tree_.make_axiom((uint32_t)pos, Clause::from_lits(std::move(pos_lits)));
        uint32_t na = tree_.make_axiom((uint32_t)neg, Clause::from_lits(std::move(neg_lits)));
        uint32_t node = tree_.make_step(pa, na, var_of(y));
        if (learned_now) *learned_now = true;
        return node;
    }

    std::map<int, uint32_t> block_decompose(const Clause& c) const {
        std::map<int, uint32_t> masks;
        std::map<int, int> slots;
        for (Lit l : c.lits()) {
            int u = xv_.vertex_of(var_of(l));
            ++slots[u];
            masks.try_emplace(u, 0);
            if (!positive(l)) masks[u] |= 1u << (xv_.slot_of(var_of(l)) - 1);
        }
        for (auto& [u, count] : slots)
            if (count != k_)
                throw domain_error("clause does not decompose into complete blocks");
        return masks;
    }

    LeafAnn annotate(const Clause& c) const {
        LeafAnn a;
        for (auto& [vert, mask] : block_decompose(c)) {
            if (odd_parity(mask)) {
                a.cuts.push_back({vert, mask});
            } else {
                if (a.w >= 0) throw domain_error("two positive blocks in an unfinished clause");
                a.w = vert;
                a.wmask = mask;
            }
        }
        if (a.w < 0) throw domain_error("no positive block in an unfinished clause");
        return a;
    }

    SubDag leaf_subgraph(const LeafAnn& a) const {
        SubDag s = restrict_to(g_, a.w);
        std::vector<int> cuts;
        for (auto& [c, m] : a.cuts) cuts.push_back(c);
        if (!cuts.empty()) s = cut_vertices(s, cuts);
        return s;
    }

    bool is_cut(const LeafAnn& a, int vert) const {
        for (auto& [c, m] : a.cuts)
            if (c == vert) return true;
        return false;
    }
    uint32_t cut_mask(const LeafAnn& a, int vert) const {
        for (auto& [c, m] : a.cuts)
            if (c == vert) return m;
        throw domain_error("internal: block mask requested for a non-cut vertex");
    }

    // Condition on unfinished leaves: the cut blocks are carryable (each cut
    // vertex reaches the sink vertex without entering the others) and the
    // branch mentions no vertex of the remaining subgraph.
    void assert_condition_d(uint32_t leaf, const LeafAnn& a) const {
        SubDag s = leaf_subgraph(a);
        for (auto& [c, m] : a.cuts)
            if (!s.contains(c))
                throw domain_error("cut block vertex cannot reach the leaf's sink vertex");
        std::vector<bool> protected_vertex(g_.n(), false);
        for (int m : s.members()) protected_vertex[m] = true;
        protected_vertex[a.w] = false;
        for (auto& [c, m] : a.cuts) protected_vertex[c] = false;
        for (uint32_t q = leaf; q != kNoNode; q = tree_.nodes[q].parent)
            for (Lit l : tree_.nodes[q].clause.lits())
                if (protected_vertex[xv_.vertex_of(var_of(l))])
                    throw domain_error("branch mentions a protected subgraph vertex");
    }

    uint32_t make_unfinished_leaf(const Clause& c) {
        uint32_t leaf = tree_.make_unfinished(c);
        ann_[leaf] = annotate(c);
        return leaf;
    }

    // ---- initial refutation -------------------------------------------------

    void build_initial() {
        int t = g_.sink();
        uint32_t root = xor_block_tree(
            xv_, t, -1,
            [&](uint32_t mask) -> uint32_t {
                Clause block = xor_block_clause(xv_, t, mask);
                if (odd_parity(mask)) {
                    uint32_t idx = (uint32_t)peb_xor_index(block);
                    bool learned_now = false;
                    uint32_t node = axiom_or_pair(idx, &learned_now);
                    if (learned_now) learn(idx, node);
                    return node;
                }
                return make_unfinished_leaf(block);
            },
            [&](uint32_t l, uint32_t r, Var v) { return tree_.make_step(l, r, v); });
        tree_.set_root(root);
        std::vector<uint32_t> leaves = collect_unfinished(root);
        for (auto it = leaves.rbegin(); it != leaves.rend(); ++it) {
            assert_condition_d(*it, ann_.at(*it));
            worklist_.push_back(*it);
        }
    }

    std::vector<uint32_t> collect_unfinished(uint32_t sub) const {
        std::vector<uint32_t> out;
        std::function<void(uint32_t)> dfs = [&](uint32_t id) {
            const LRNode& n = tree_.nodes[id];
            if (n.unfinished) out.push_back(id);
            if (n.kind == NodeKind::Step) {
                dfs(n.a);
                dfs(n.b);
            }
        };
        dfs(sub);
        return out;
    }

    // ---- per-stage work -------------------------------------------------------

    void stage(uint32_t leaf) {
        const LeafAnn a = ann_.at(leaf);
        LRTree::BranchInfo branch = tree_.branch_info(leaf);
        SubDag sub = leaf_subgraph(a);
        XorPebGoal goal;
        goal.w = a.w;
        goal.w_mask = a.wmask;
        for (auto& [c, m] : a.cuts) goal.carried[c] = m;
        XorPebDerivation p = reg_xor_peb_derivation(g_, k_, sub, goal);
        if (!(p.dag.nodes[p.dag.root].clause == tree_.nodes[leaf].clause))
            throw domain_error("internal: subgraph derivation concludes the wrong clause");

        auto below = pivots_below(p.dag, xv_.count());
        int first_blocked = -1;
        std::vector<int> tags(p.axiom_nodes.size());  // 0 learned/plain, 1 guard-on-branch,
                                                      // 2 pair, 3 blocked
        for (size_t i = 0; i < p.axiom_nodes.size(); ++i) {
            uint32_t node = p.axiom_nodes[i];
            uint32_t d_idx = p.dag.nodes[node].axiom_index;
            auto entry = learned_.find(d_idx);
            if (entry != learned_.end() && tree_.post_less(entry->second, leaf)) {
                tags[i] = 0;
                continue;
            }
            if (rho_.guard[d_idx] == 0) {
                tags[i] = 0;  // unguarded lifted clauses are formula clauses
                continue;
            }
            Var y = rho_.guard[d_idx];
            if (branch.nearest.count(y)) {
                tags[i] = 1;
            } else if (!below[node].contains(y)) {
                tags[i] = 2;
            } else {
                tags[i] = 3;
                if (first_blocked < 0) first_blocked = (int)i;
            }
        }

        if (first_blocked < 0) {
            patch_and_splice(leaf, p, tags, branch);
            return;
        }
        for (size_t i = (size_t)first_blocked; i < p.axiom_nodes.size(); ++i) {
            if (tags[i] != 3) continue;
            uint32_t d_idx = p.dag.nodes[p.axiom_nodes[i]].axiom_index;
            if (expand_blocked(leaf, a, branch, d_idx)) {
                ++log_.expansions;
                return;
            }
        }
        throw domain_error("no blocked clause admits a replacement derivation");
    }

    // ---- success path ----------------------------------------------------------

    void patch_and_splice(uint32_t leaf, XorPebDerivation& p, const std::vector<int>& tags,
                          const LRTree::BranchInfo& branch) {
        Dag& dag = p.dag;
        std::vector<std::pair<uint32_t, uint32_t>> learned_steps;  // dag node, lifted idx
        for (size_t i = 0; i < p.axiom_nodes.size(); ++i) {
            uint32_t nid = p.axiom_nodes[i];
            DagNode& node = dag.nodes[nid];
            uint32_t d_idx = node.axiom_index;
            auto [pos, neg] = gpeb_clause_indices(rho_, d_idx);
            switch (tags[i]) {
                case 0: {
                    auto entry = learned_.find(d_idx);
                    if (entry != learned_.end() && tree_.post_less(entry->second, leaf)) {
                        node.kind = DagNode::Kind::External;
                        node.external = entry->second;
                    } else {
                        node.axiom_index = (uint32_t)pos;  // unguarded formula clause
                    }
                    break;
                }
                case 1: {
                    Lit present = branch.nearest.at(rho_.guard[d_idx]);
                    node.axiom_index =
                        present == (Lit)rho_.guard[d_idx] ? (uint32_t)pos : (uint32_t)neg;
                    auto lits = node.clause.lits();
                    lits.push_back(present);
                    node.clause = Clause::from_lits(std::move(lits));
                    break;
                }
                case 2: {
                    Lit y = (Lit)rho_.guard[d_idx];
                    Clause d_clause = node.clause;
                    auto pos_lits = d_clause.lits();
                    pos_lits.push_back(y);
                    auto neg_lits = d_clause.lits();
                    neg_lits.push_back(-y);
                    uint32_t pa =
                        dag.add_axiom(Clause::from_lits(std::move(pos_lits)), (uint32_t)pos);
                    uint32_t na =
                        dag.add_axiom(Clause::from_lits(std::move(neg_lits)), (uint32_t)neg);
                    DagNode& nd = dag.nodes[nid];
                    nd.kind = DagNode::Kind::Step;
                    nd.left = pa;
                    nd.right = na;
                    nd.pivot = rho_.guard[d_idx];
                    learned_steps.push_back({nid, d_idx});
                    break;
                }
                default: throw domain_error("internal: blocked clause in patch");
            }
        }
        for (uint32_t id = 0; id < dag.size(); ++id) {
            DagNode& n = dag.nodes[id];
            if (n.kind == DagNode::Kind::Step)
                n.clause =
                    resolve_any(dag.nodes[n.left].clause, dag.nodes[n.right].clause, n.pivot);
        }
        Clause conclusion = dag.nodes[dag.root].clause;
        std::vector<Lit> extras;
        for (Lit l : conclusion.lits())
            if (!tree_.nodes[leaf].clause.contains(l)) extras.push_back(l);

        std::map<uint32_t, uint32_t> first_emitted;
        LRTreeEmitter em{tree_, nullptr};
        StepEmitHook hook = [&](uint32_t dag_node, uint64_t handle) {
            first_emitted.emplace(dag_node, (uint32_t)handle);
        };
        Emitted root = dag_to_tree_input_lemmas(dag, xv_.count(), em, hook);
        uint32_t sub = (uint32_t)root.handle;
        tree_.splice(leaf, sub);
        ann_.erase(leaf);
        for (auto& [dn, d_idx] : learned_steps) {
            auto it = first_emitted.find(dn);
            if (it == first_emitted.end())
                throw domain_error("internal: learned step was never emitted");
            learn(d_idx, it->second == sub ? leaf : it->second);
        }
        for (Lit l : extras) {
            bool in_branch = false;
            for (Lit b : branch.cplus)
                if (b == l) in_branch = true;
            if (!in_branch) throw domain_error("conclusion literal outside the branch closure");
            tree_.thread_down(leaf, l);
        }
    }

    // ---- blocked-clause templates ------------------------------------------------

    struct Fam {
        std::vector<std::pair<int, bool>> parts;  // (vertex, positive translation?)
        Clause fixed;
    };
    struct TemplateSpec {
        Fam f0;
        std::vector<std::pair<int, Fam>> stages;  // innermost elimination first
        std::map<int, uint32_t> dmask;
    };

    Clause fam_instance(const Fam& f, const std::map<int, uint32_t>& masks) const {
        std::vector<Lit> lits = f.fixed.lits();
        for (auto& [vert, pos] : f.parts) {
            auto it = masks.find(vert);
            if (it == masks.end()) throw domain_error("internal: unassigned template vertex");
            if (odd_parity(it->second) == pos)
                throw domain_error("internal: template parity mismatch");
            Clause block = xor_block_clause(xv_, vert, it->second);
            for (Lit l : block.lits()) lits.push_back(l);
        }
        return Clause::from_lits(std::move(lits));
    }

    Clause blocks_clause(const std::vector<std::pair<int, uint32_t>>& blocks) const {
        std::vector<Lit> lits;
        for (auto& [vert, mask] : blocks) {
            Clause b = xor_block_clause(xv_, vert, mask);
            for (Lit l : b.lits()) lits.push_back(l);
        }
        return Clause::from_lits(std::move(lits));
    }

    bool build_template(uint32_t leaf, const LRTree::BranchInfo& branch,
                        const TemplateSpec& spec) {
        std::vector<std::pair<int, bool>> open = spec.f0.parts;
        std::vector<bool> stage_parity;
        for (auto& [z, fam] : spec.stages) {
            auto it = std::find_if(open.begin(), open.end(),
                                   [zz = z](auto& pr) { return pr.first == zz; });
            if (it == open.end())
                throw domain_error("internal: template eliminates a closed vertex");
            stage_parity.push_back(it->second);
            open.erase(it);
            for (auto& part : fam.parts)
                if (part.first != z) open.push_back(part);
        }
        if (!open.empty()) throw domain_error("internal: template leaves a vertex open");

        uint32_t learn_node = kNoNode;
        std::map<int, uint32_t> masks;
        auto rec = [&](auto&& self, int t, std::map<int, uint32_t>& ms) -> uint32_t {
            if (t == 0) {
                Clause inst = fam_instance(spec.f0, ms);
                bool is_d = true;
                for (auto& [vert, mask] : spec.dmask)
                    if (!ms.count(vert) || ms.at(vert) != mask) is_d = false;
                if (is_d) {
                    uint32_t idx = (uint32_t)peb_xor_index(inst);
                    uint32_t node = axiom_or_pair(idx);
                    if (learn_node == kNoNode) learn_node = node;
                    return node;
                }
                return make_unfinished_leaf(inst);
            }
            auto& [z, fam] = spec.stages[t - 1];
            bool r_positive = stage_parity[t - 1];
            int route = spec.dmask.count(z) ? (int)spec.dmask.at(z) : (r_positive ? 0 : 1);
            return xor_block_tree(
                xv_, z, route,
                [&](uint32_t mask) -> uint32_t {
                    ms[z] = mask;
                    uint32_t out;
                    if (odd_parity(mask) != r_positive) {
                        out = self(self, t - 1, ms);
                    } else {
                        out = make_unfinished_leaf(fam_instance(fam, ms));
                    }
                    ms.erase(z);
                    return out;
                },
                [&](uint32_t l, uint32_t r, Var pv) { return tree_.make_step(l, r, pv); });
        };
        uint32_t cnode = rec(rec, (int)spec.stages.size(), masks);
        if (learn_node == kNoNode)
            throw domain_error("internal: designated leaf never appeared");

        const Clause& want = tree_.nodes[leaf].clause;
        const Clause& got = tree_.nodes[cnode].clause;
        std::vector<Lit> extras;
        for (Lit l : got.lits())
            if (!want.contains(l)) extras.push_back(l);
        for (Lit l : want.lits())
            if (!got.contains(l))
                throw domain_error("replacement derivation lost a literal of the leaf clause");
        for (Lit l : extras) {
            bool in_branch = false;
            for (Lit b : branch.cplus)
                if (b == l) in_branch = true;
            if (!in_branch)
                throw domain_error("replacement conclusion literal outside the branch closure");
        }

        tree_.splice(leaf, cnode);
        ann_.erase(leaf);
        uint32_t ln = learn_node == cnode ? leaf : learn_node;
        uint32_t d_idx;
        {
            Clause d_clause = tree_.nodes[ln].clause;
            d_idx = (uint32_t)peb_xor_index(d_clause);
        }
        learn(d_idx, ln);
        for (Lit l : extras) tree_.thread_down(leaf, l);

        std::vector<uint32_t> leaves = collect_unfinished(leaf);
        if (leaves.size() >= ((size_t)1 << (4 * k_)))
            throw domain_error("expansion created too many unfinished leaves");
        log_.unfinished_created += leaves.size();
        log_.max_new_leaves_per_expansion =
            std::max(log_.max_new_leaves_per_expansion, leaves.size());
        for (auto it = leaves.rbegin(); it != leaves.rend(); ++it) {
            assert_condition_d(*it, ann_.at(*it));
            worklist_.push_back(*it);
        }
        return true;
    }

    // Full odd blocks available on the branch, by vertex.
    std::map<int, uint32_t> branch_blocks(const LRTree::BranchInfo& branch) const {
        std::map<int, uint32_t> mask_of;
        std::map<int, std::set<int>> slots;
        for (Lit l : branch.cplus) {
            int vert = xv_.vertex_of(var_of(l));
            slots[vert].insert(xv_.slot_of(var_of(l)));
            mask_of.try_emplace(vert, 0);
            if (!positive(l)) mask_of[vert] |= 1u << (xv_.slot_of(var_of(l)) - 1);
        }
        std::map<int, uint32_t> out;
        for (auto& [vert, ss] : slots) {
            if ((int)ss.size() != k_) continue;  // partial block: not carryable
            // both polarities of a slot never occur on one branch of a
            // regular proof, so the mask is well defined
            if (odd_parity(mask_of[vert])) out[vert] = mask_of[vert];
        }
        return out;
    }

    // The cut blocks to carry under a family with the given sink: every
    // branch-known block whose vertex survives into the family's subgraph.
    std::vector<std::pair<int, uint32_t>> survivors(
        int sink, const std::map<int, uint32_t>& candidates) const {
        SubDag h = restrict_to(g_, sink);
        std::vector<int> t;
        for (auto& [c, m] : candidates)
            if (c != sink && h.contains(c)) t.push_back(c);
        if (!t.empty()) h = cut_vertices(h, t);
        std::vector<std::pair<int, uint32_t>> out;
        for (int c : t)
            if (h.contains(c)) out.push_back({c, candidates.at(c)});
        return out;
    }

    // Is a family with the given cut set and sink vertex admissible against
    // the vertices whose blocks occur on the branch below it?
    bool family_ok(const std::vector<int>& cuts, int s,
                   const std::vector<int>& branch_verts) const {
        SubDag sub = restrict_to(g_, s);
        for (int c : cuts)
            if (!sub.contains(c)) return false;
        if (!cuts.empty()) sub = cut_vertices(sub, cuts);
        for (int c : cuts)
            if (!sub.contains(c)) return false;  // dominated by another cut
        for (int b : branch_verts) {
            if (b < 0 || b == s) continue;
            if (std::find(cuts.begin(), cuts.end(), b) != cuts.end()) continue;
            if (sub.contains(b)) return false;
        }
        return true;
    }

    bool expand_blocked(uint32_t leaf, const LeafAnn& a, const LRTree::BranchInfo& branch,
                        uint32_t d_idx) {
        const Clause& d = peb_xor_.clauses[d_idx];
        auto dm = block_decompose(d);
        int e = -1;
        uint32_t emask = 0;
        std::vector<std::pair<int, uint32_t>> negparts;
        for (auto& [vert, mask] : dm) {
            if (odd_parity(mask))
                negparts.push_back({vert, mask});
            else {
                e = vert;
                emask = mask;
            }
        }
        if (e < 0 || negparts.size() > 2)
            throw domain_error("internal: blocked clause is not an alpha or beta lift");
        int avoid = rho_.guard[d_idx] ? xv_.vertex_of(rho_.guard[d_idx]) : -1;

        // branch-vertex set for admissibility checks
        std::vector<int> branch_verts;
        {
            std::set<int> seen;
            for (Lit l : branch.cplus) seen.insert(xv_.vertex_of(var_of(l)));
            branch_verts.assign(seen.begin(), seen.end());
        }
        auto add_template_verts = [&](std::initializer_list<int> more) {
            std::vector<int> out = branch_verts;
            for (int m : more)
                if (m >= 0) out.push_back(m);
            return out;
        };

        if (a.cuts.size() <= 2) {
            // the bounded shapes first: these follow the two- and三-case
            // placements and the divergence-vertex construction
            if (expand_small(leaf, a, branch, e, emask, negparts, avoid, add_template_verts))
                return true;
        }
        // general fallback: carry the surviving branch blocks under every piece
        ++log_.general_templates;
        return expand_general(leaf, a, branch, e, emask, negparts);
    }

    // ---- bounded-cut templates (the common case) -------------------------------

    bool expand_small(uint32_t leaf, const LeafAnn& a, const LRTree::BranchInfo& branch,
                      int e, uint32_t emask, std::vector<std::pair<int, uint32_t>> negparts,
                      int avoid,
                      const std::function<std::vector<int>(std::initializer_list<int>)>& verts) {
        int u = a.cuts.size() >= 1 ? a.cuts[0].first : -1;
        int v = a.cuts.size() == 2 ? a.cuts[1].first : -1;
        uint32_t um = u >= 0 ? a.cuts[0].second : 0, vm = v >= 0 ? a.cuts[1].second : 0;
        if (v >= 0 && g_.reaches(v, u, {})) {  // keep v not an ancestor of u
            std::swap(u, v);
            std::swap(um, vm);
        }
        Clause wfix = blocks_clause({{a.w, a.wmask}});

        if (negparts.empty()) {
            // alpha leaf at a source e
            Fam f0{{{e, true}}, Clause()};
            std::map<int, uint32_t> dmask{{e, emask}};
            if (u < 0) {
                if (!family_ok({e}, a.w, verts({}))) return false;
                return build_template(leaf, branch,
                                      {f0, {{e, Fam{{{e, false}}, wfix}}}, dmask});
            }
            if (v < 0) {
                if (e == u) throw domain_error("internal: cut vertex used as an alpha leaf");
                if (!family_ok({u, e}, a.w, verts({}))) return false;
                Clause uw = blocks_clause({{u, um}, {a.w, a.wmask}});
                return build_template(leaf, branch,
                                      {f0, {{e, Fam{{{e, false}}, uw}}}, dmask});
            }
            auto divg = find_divergence(u, v, a.w, e, avoid, verts);
            if (!divg) return false;
            return build_divergence(leaf, branch, f0, dmask, {}, u, um, v, vm, a.w, a.wmask, e,
                                    *divg);
        }

        // beta leaf: order the predecessors so the second is not an ancestor
        // of the first
        int pa = negparts[0].first, pb = negparts[1].first;
        uint32_t pam = negparts[0].second, pbm = negparts[1].second;
        if (g_.reaches(pb, pa, {})) {
            std::swap(pa, pb);
            std::swap(pam, pbm);
        }
        if (u >= 0 && (e == u || e == v))
            throw domain_error("internal: cut vertex has a beta leaf in the derivation");
        const bool e_is_w = e == a.w;
        if (e_is_w && emask != a.wmask)
            throw domain_error("internal: sink instance differs from the leaf clause");

        bool pa_matched = pa == u || pa == v;
        bool pb_matched = pb == u || pb == v;
        if (pa_matched && cut_mask(a, pa) != pam)
            throw domain_error("internal: matched block differs from the leaf cut block");
        if (pb_matched && cut_mask(a, pb) != pbm)
            throw domain_error("internal: matched block differs from the leaf cut block");
        std::vector<int> free_cuts;
        for (auto& [c, m] : a.cuts)
            if (c != pa && c != pb) free_cuts.push_back(c);
        if (v >= 0 && free_cuts.size() == 2 && free_cuts[0] == v) std::swap(free_cuts[0], free_cuts[1]);

        struct Placement {
            std::vector<int> s1, s2, s3;
        };
        std::vector<Placement> options;
        if (free_cuts.empty()) {
            options.push_back({{}, {}, {}});
        } else if (free_cuts.size() == 1) {
            int c = free_cuts[0];
            options.push_back({{c}, {}, {}});
            options.push_back({{}, {c}, {}});
            if (!e_is_w) options.push_back({{}, {}, {c}});
        } else {
            int c1 = free_cuts[0], c2 = free_cuts[1];
            if (!e_is_w) {
                options.push_back({{c1}, {}, {c2}});
                options.push_back({{}, {c1}, {c2}});
                options.push_back({{c2}, {}, {c1}});
                options.push_back({{}, {c2}, {c1}});
            }
            options.push_back({{c1}, {c2}, {}});
            options.push_back({{c2}, {c1}, {}});
            options.push_back({{c1, c2}, {}, {}});
            options.push_back({{}, {c1, c2}, {}});
        }

        for (const Placement& p : options) {
            if ((pa_matched && !p.s1.empty()) || (pb_matched && !p.s2.empty())) continue;
            bool ok = true;
            if (!pa_matched) ok = ok && family_ok(p.s1, pa, verts({pa, pb, e}));
            if (!pb_matched) ok = ok && family_ok(p.s2, pb, verts({pa, pb, e}));
            if (!e_is_w) {
                std::vector<int> s3 = p.s3;
                s3.push_back(e);
                ok = ok && family_ok(s3, a.w, verts({pa, pb, e}));
            }
            if (!ok) continue;

            Fam f0;
            {
                std::vector<std::pair<int, uint32_t>> fixed;
                if (pa_matched) fixed.push_back({pa, pam});
                if (pb_matched) fixed.push_back({pb, pbm});
                if (e_is_w) fixed.push_back({a.w, a.wmask});
                f0.fixed = blocks_clause(fixed);
            }
            std::map<int, uint32_t> dmask;
            if (!pa_matched) {
                f0.parts.push_back({pa, false});
                dmask[pa] = pam;
            }
            if (!pb_matched) {
                f0.parts.push_back({pb, false});
                dmask[pb] = pbm;
            }
            if (!e_is_w) {
                f0.parts.push_back({e, true});
                dmask[e] = emask;
            }
            auto slot_fixed = [&](const std::vector<int>& slot, bool add_w) {
                std::vector<std::pair<int, uint32_t>> blocks;
                for (int c : slot) blocks.push_back({c, cut_mask(a, c)});
                if (add_w) blocks.push_back({a.w, a.wmask});
                return blocks_clause(blocks);
            };
            std::vector<std::pair<int, Fam>> stages;
            if (!pa_matched) stages.push_back({pa, Fam{{{pa, true}}, slot_fixed(p.s1, false)}});
            if (!pb_matched) stages.push_back({pb, Fam{{{pb, true}}, slot_fixed(p.s2, false)}});
            if (!e_is_w) stages.push_back({e, Fam{{{e, false}}, slot_fixed(p.s3, true)}});
            if (stages.empty())
                throw domain_error("internal: the blocked clause equals the leaf clause");
            return build_template(leaf, branch, {f0, stages, dmask});
        }

        if (v >= 0 && !pa_matched && !pb_matched && !e_is_w) {
            auto divg = find_divergence(u, v, a.w, e, avoid, verts);
            if (!divg) return false;
            Fam f0{{{pa, false}, {pb, false}, {e, true}}, Clause()};
            std::map<int, uint32_t> dmask{{pa, pam}, {pb, pbm}, {e, emask}};
            if (!family_ok({}, pa, verts({pa, pb, e, divg->f})) ||
                !family_ok({}, pb, verts({pa, pb, e, divg->f})))
                return false;
            std::vector<std::pair<int, Fam>> prefix{
                {pa, Fam{{{pa, true}}, Clause()}},
                {pb, Fam{{{pb, true}}, Clause()}},
            };
            return build_divergence(leaf, branch, f0, dmask, prefix, u, um, v, vm, a.w,
                                    a.wmask, e, *divg);
        }
        return false;
    }

    struct Divergence {
        int f;
        int grouping;  // 0: u with e, 1: v with e, 2: u with v
    };

    std::optional<Divergence> find_divergence(
        int u, int v, int w, int e, int avoid,
        const std::function<std::vector<int>(std::initializer_list<int>)>& verts) const {
        auto valid = [&](int f, int grouping) {
            if (f == u || f == v || f == w || f == e || f == avoid) return false;
            switch (grouping) {
                case 0:
                    return family_ok({u, e}, f, verts({v, f})) &&
                           family_ok({f, v}, w, verts({u, e, f}));
                case 1:
                    return family_ok({v, e}, f, verts({u, f})) &&
                           family_ok({f, u}, w, verts({v, e, f}));
                default:
                    return family_ok({e, f}, w, verts({u, v, f})) &&
                           family_ok({u, v}, f, verts({e, f}));
            }
        };
        try {
            DivergenceResult r = divergence_vertex(g_, w, {e, u, v});
            int grouping = -1;
            auto& m = r.matched;
            if ((m[0] == e && m[1] == u) || (m[0] == u && m[1] == e)) grouping = 0;
            if ((m[0] == e && m[1] == v) || (m[0] == v && m[1] == e)) grouping = 1;
            if ((m[0] == u && m[1] == v) || (m[0] == v && m[1] == u)) grouping = 2;
            if (grouping >= 0 && valid(r.f, grouping)) return Divergence{r.f, grouping};
        } catch (const domain_error&) {
        }
        for (int grouping = 0; grouping < 3; ++grouping)
            for (int f = 0; f < g_.n(); ++f)
                if (valid(f, grouping)) return Divergence{f, grouping};
        return std::nullopt;
    }

    bool build_divergence(uint32_t leaf, const LRTree::BranchInfo& branch, Fam f0,
                          std::map<int, uint32_t> dmask,
                          std::vector<std::pair<int, Fam>> prefix, int u, uint32_t um, int v,
                          uint32_t vm, int w, uint32_t wm, int e, const Divergence& divg) {
        Clause ufix = blocks_clause({{u, um}});
        Clause vfix = blocks_clause({{v, vm}});
        Clause uvfix = blocks_clause({{u, um}, {v, vm}});
        Clause vw = blocks_clause({{v, vm}, {w, wm}});
        Clause uw = blocks_clause({{u, um}, {w, wm}});
        Clause wfix = blocks_clause({{w, wm}});
        std::vector<std::pair<int, Fam>> stages = std::move(prefix);
        switch (divg.grouping) {
            case 0:
                stages.push_back({e, Fam{{{e, false}, {divg.f, true}}, ufix}});
                stages.push_back({divg.f, Fam{{{divg.f, false}}, vw}});
                break;
            case 1:
                stages.push_back({e, Fam{{{e, false}, {divg.f, true}}, vfix}});
                stages.push_back({divg.f, Fam{{{divg.f, false}}, uw}});
                break;
            default:
                stages.push_back({e, Fam{{{e, false}, {divg.f, false}}, wfix}});
                stages.push_back({divg.f, Fam{{{divg.f, true}}, uvfix}});
                break;
        }
        return build_template(leaf, branch, {std::move(f0), std::move(stages), std::move(dmask)});
    }

    // ---- the general template ----------------------------------------------------

    // Carry, under each elimination, every branch-known block that survives
    // into that piece's subgraph. The conclusion may pick up carried blocks
    // beyond the leaf clause; they are branch literals and ride down to
    // their absorption points.
    bool expand_general(uint32_t leaf, const LeafAnn& a, const LRTree::BranchInfo& branch,
                        int e, uint32_t emask, std::vector<std::pair<int, uint32_t>> negparts) {
        std::map<int, uint32_t> candidates = branch_blocks(branch);
        for (auto& [c, m] : a.cuts) candidates[c] = m;  // leaf cuts are branch blocks too

        const bool e_is_w = e == a.w;
        if (e_is_w && emask != a.wmask)
            throw domain_error("internal: sink instance differs from the leaf clause");

        int pa = -1, pb = -1;
        uint32_t pam = 0, pbm = 0;
        if (!negparts.empty()) {
            pa = negparts[0].first;
            pam = negparts[0].second;
            pb = negparts[1].first;
            pbm = negparts[1].second;
            if (g_.reaches(pb, pa, {})) {
                std::swap(pa, pb);
                std::swap(pam, pbm);
            }
        }
        bool pa_matched = pa >= 0 && is_cut(a, pa);
        bool pb_matched = pb >= 0 && is_cut(a, pb);

        Fam f0;
        {
            std::vector<std::pair<int, uint32_t>> fixed;
            if (pa_matched) fixed.push_back({pa, pam});
            if (pb_matched) fixed.push_back({pb, pbm});
            if (e_is_w) fixed.push_back({a.w, a.wmask});
            f0.fixed = blocks_clause(fixed);
        }
        std::map<int, uint32_t> dmask;
        if (pa >= 0 && !pa_matched) {
            f0.parts.push_back({pa, false});
            dmask[pa] = pam;
        }
        if (pb >= 0 && !pb_matched) {
            f0.parts.push_back({pb, false});
            dmask[pb] = pbm;
        }
        if (!e_is_w) {
            f0.parts.push_back({e, true});
            dmask[e] = emask;
        }
        std::vector<std::pair<int, Fam>> stages;
        if (pa >= 0 && !pa_matched)
            stages.push_back({pa, Fam{{{pa, true}}, blocks_clause(survivors(pa, candidates))}});
        if (pb >= 0 && !pb_matched)
            stages.push_back({pb, Fam{{{pb, true}}, blocks_clause(survivors(pb, candidates))}});
        if (!e_is_w) {
            auto e_candidates = candidates;
            e_candidates[e] = 0;  // e is eliminated here, never carried
            auto surv = survivors(a.w, candidates);
            std::vector<std::pair<int, uint32_t>> kept;
            for (auto& [c, m] : surv)
                if (c != e) kept.push_back({c, m});
            kept.push_back({a.w, a.wmask});
            stages.push_back({e, Fam{{{e, false}}, blocks_clause(kept)}});
        }
        if (stages.empty())
            throw domain_error("internal: the blocked clause equals the leaf clause");
        return build_template(leaf, branch, {f0, stages, dmask});
    }
};

inline Proof refute_gpeb(const PointedDag& g, int k, const GuardMap& rho,
                         GpebRunLog* log = nullptr) {
    GpebProver prover(g, k, rho);
    Proof p = prover.refute();
    if (log) {
        *log = prover.log();
        log->n = g.n();
        log->k = k;
    }
    return p;
}

}  // namespace poolres
