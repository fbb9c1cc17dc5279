#pragma once

// The proof checker suite: structural soundness, regularity, the pool
// property (lemmas reference earlier clauses), the input-lemma property, and
// the greedy/unit-propagating discipline.

#include <deque>
#include <map>

#include "poolres/proof.hpp"

namespace poolres {

struct Verdict {
    bool ok = true;
    int64_t node = -1;  // first violating node, when any
    std::string message;
    std::vector<uint32_t> flagged;  // greedy check: multi-clause-learning nodes

    static Verdict pass() { return {}; }
    static Verdict fail(uint32_t node, std::string msg) {
        Verdict v;
        v.ok = false;
        v.node = node;
        v.message = std::move(msg);
        return v;
    }
};

// Structural and inferential soundness: postorder tree layout, axioms found
// in the formula, every step clause re-derived from its children, lemma
// clauses equal to their targets. `listed` (when present, e.g. from a proof
// file) is compared bit-exactly against the re-derived clauses.
inline Verdict check_soundness(const Proof& p, const CnfFormula& f,
                               const std::vector<std::optional<Clause>>* listed = nullptr) {
    if (p.size() == 0) return Verdict::fail(0, "empty proof");
    // postorder layout: right child directly precedes its parent, left
    // subtree directly precedes the right subtree
    std::vector<uint32_t> subtree_min(p.size());
    for (uint32_t id = 0; id < p.size(); ++id) {
        const ProofNode& n = p.nodes[id];
        subtree_min[id] = id;
        if (n.kind == NodeKind::Step) {
            if (n.a >= id || n.b >= id)
                return Verdict::fail(id, "step references a non-earlier node");
            if (n.b != id - 1) return Verdict::fail(id, "right child is not the previous node");
            if (subtree_min[n.b] == 0 || n.a != subtree_min[n.b] - 1)
                return Verdict::fail(id, "left subtree does not precede the right subtree");
            subtree_min[id] = subtree_min[n.a];
        } else if (n.kind == NodeKind::Lemma) {
            if (n.a >= id) return Verdict::fail(id, "lemma references a non-earlier node");
        }
    }
    Verdict out = Verdict::pass();
    try {
        std::map<uint32_t, Clause> lemma_targets;
        for (uint32_t id = 0; id < p.size(); ++id)
            if (p.nodes[id].kind == NodeKind::Lemma) lemma_targets.emplace(p.nodes[id].a, Clause());
        for_each_clause(p, f, [&](uint32_t id, const Clause& c) {
            if (!out.ok) return;
            const ProofNode& n = p.nodes[id];
            if (n.kind == NodeKind::Lemma) {
                auto it = lemma_targets.find(n.a);
                if (it != lemma_targets.end() && !(it->second == c)) {
                    out = Verdict::fail(id, "lemma clause differs from its target");
                    return;
                }
            }
            auto it = lemma_targets.find(id);
            if (it != lemma_targets.end()) it->second = c;
            if (listed && (*listed)[id] && !(*(*listed)[id] == c)) {
                out = Verdict::fail(id, "listed clause differs from the derived clause");
                return;
            }
        });
    } catch (const domain_error& e) {
        return Verdict::fail(0, e.what());
    }
    return out;
}

// No variable is used as a pivot twice along any root-to-leaf path. In
// derivation mode, additionally no variable of the conclusion clause is used
// as a pivot anywhere.
inline Verdict check_regular(const Proof& p, const CnfFormula& f, bool derivation_mode = false) {
    if (derivation_mode) {
        Clause conclusion = clause_of_root(p, f);
        for (uint32_t id = 0; id < p.size(); ++id) {
            const ProofNode& n = p.nodes[id];
            if (n.kind == NodeKind::Step && conclusion.contains_var(n.pivot))
                return Verdict::fail(id, "conclusion variable used as pivot");
        }
    }
    // iterative DFS from the root with a per-path pivot multiset
    std::vector<uint32_t> seen(f.num_vars + 1, 0);
    struct Frame {
        uint32_t id;
        int phase;
    };
    std::vector<Frame> stack{{p.root(), 0}};
    while (!stack.empty()) {
        auto& [id, phase] = stack.back();
        const ProofNode& n = p.nodes[id];
        if (n.kind != NodeKind::Step) {
            stack.pop_back();
            continue;
        }
        if (phase == 0) {
            if (n.pivot == 0 || n.pivot > f.num_vars)
                return Verdict::fail(id, "pivot out of range");
            if (seen[n.pivot]) return Verdict::fail(id, "variable " + std::to_string(n.pivot) +
                                                            " pivoted twice on a path");
            ++seen[n.pivot];
            phase = 1;
            stack.push_back({n.a, 0});
        } else if (phase == 1) {
            phase = 2;
            stack.push_back({n.b, 0});
        } else {
            --seen[n.pivot];
            stack.pop_back();
        }
    }
    return Verdict::pass();
}

// Pool property (regRTL): regular, and every lemma references a node earlier
// in postorder. Earlier-reference is already structural; re-checked here so
// hostile inputs fail with a verdict instead of an exception.
inline Verdict check_regrtl(const Proof& p, const CnfFormula& f) {
    for (uint32_t id = 0; id < p.size(); ++id)
        if (p.nodes[id].kind == NodeKind::Lemma && p.nodes[id].a >= id)
            return Verdict::fail(id, "lemma references a later node");
    return check_regular(p, f, false);
}

// Input-lemma property (regRTI): pool, and every lemma target is the root of
// an input subderivation.
inline Verdict check_regrti(const Proof& p, const CnfFormula& f) {
    Verdict v = check_regrtl(p, f);
    if (!v.ok) return v;
    auto input = input_derived_flags(p);
    for (uint32_t id = 0; id < p.size(); ++id)
        if (p.nodes[id].kind == NodeKind::Lemma && !input[p.nodes[id].a])
            return Verdict::fail(id, "lemma target is not derived by an input subderivation");
    return Verdict::pass();
}

// --- greedy / unit-propagating -------------------------------------------

namespace detail {

// Counter-based unit propagation over a subsumption-reduced clause set.
// Keeping only subsumption-minimal clauses preserves unit-propagation
// conflicts exactly: a subset clause conflicts or propagates no later than
// any of its supersets.
class GreedyUpDatabase {
  public:
    explicit GreedyUpDatabase(Var num_vars) : num_vars_(num_vars) {}

    void add(const Clause& c) {
        for (const Clause& d : clauses_)
            if (d.subset_of(c)) return;
        std::vector<Clause> kept;
        for (Clause& d : clauses_)
            if (!c.subset_of(d)) kept.push_back(std::move(d));
        kept.push_back(c);
        clauses_ = std::move(kept);
    }

    // True iff unit propagation under "every literal of cplus is false"
    // reaches a conflict.
    bool conflicts(const std::vector<Lit>& cplus) const {
        std::vector<int8_t> val(num_vars_ + 1, 0);  // 0 unassigned, +1 true, -1 false
        std::deque<Lit> queue;
        auto assign = [&](Lit l) -> bool {  // false on contradiction
            int8_t want = positive(l) ? 1 : -1;
            int8_t& v = val[var_of(l)];
            if (v == 0) {
                v = want;
                queue.push_back(l);
                return true;
            }
            return v == want;
        };
        for (Lit l : cplus)
            if (!assign(-l)) return true;
        while (true) {
            bool changed = false;
            for (const Clause& c : clauses_) {
                int unassigned = 0;
                Lit unit = 0;
                bool sat = false;
                for (Lit l : c.lits()) {
                    int8_t v = val[var_of(l)];
                    if (v == 0) {
                        ++unassigned;
                        unit = l;
                    } else if ((v > 0) == positive(l)) {
                        sat = true;
                        break;
                    }
                }
                if (sat) continue;
                if (unassigned == 0) return true;  // falsified clause
                if (unassigned == 1) {
                    if (!assign(unit)) return true;
                    changed = true;
                }
            }
            if (!changed) return false;
        }
    }

    size_t size() const { return clauses_.size(); }

  private:
    Var num_vars_;
    std::vector<Clause> clauses_;
};

}  // namespace detail

// For every node C, taken in postorder: if unit propagation from the
// formula plus the input-derived clauses earlier in postorder refutes the
// assignment falsifying C+, then C's subderivation must itself be a single
// input derivation whose pivots avoid the variables of C+. Nodes failing
// only the single-derivation shape (pivots clean, subtree not input) are
// reported as flagged, not failed: they match clause learning that learns
// several clauses at one conflict.
inline Verdict check_greedy_up(const Proof& p, const CnfFormula& f) {
    std::vector<std::optional<Clause>> clauses(p.size());
    for_each_clause(p, f, [&](uint32_t id, const Clause& c) { clauses[id] = c; });

    auto input = input_derived_flags(p);
    // pivots of each node's subtree, as sets of vars (stored sparse)
    std::vector<std::vector<Var>> sub_pivots(p.size());
    for (uint32_t id = 0; id < p.size(); ++id) {
        const ProofNode& n = p.nodes[id];
        if (n.kind != NodeKind::Step) continue;
        auto& sp = sub_pivots[id];
        sp = sub_pivots[n.a];
        sp.insert(sp.end(), sub_pivots[n.b].begin(), sub_pivots[n.b].end());
        sp.push_back(n.pivot);
        std::sort(sp.begin(), sp.end());
        sp.erase(std::unique(sp.begin(), sp.end()), sp.end());
    }

    detail::GreedyUpDatabase db(f.num_vars);
    for (const Clause& c : f.clauses) db.add(c);

    // children lists for the root-path walk
    std::vector<uint32_t> parent(p.size(), UINT32_MAX);
    for (uint32_t id = 0; id < p.size(); ++id)
        if (p.nodes[id].kind == NodeKind::Step) {
            parent[p.nodes[id].a] = id;
            parent[p.nodes[id].b] = id;
        }

    Verdict out = Verdict::pass();
    for (uint32_t id = 0; id < p.size(); ++id) {
        // C+ = literals on the branch from the root up to and including id
        std::vector<Lit> cplus;
        for (uint32_t walk = id;; walk = parent[walk]) {
            for (Lit l : clauses[walk]->lits()) cplus.push_back(l);
            if (parent[walk] == UINT32_MAX) break;
        }
        std::sort(cplus.begin(), cplus.end(), Clause::lit_less);
        cplus.erase(std::unique(cplus.begin(), cplus.end()), cplus.end());

        // both polarities of a variable on one branch cannot happen in a
        // regular proof; skip the vacuous assignment if it does
        bool both_polarities = false;
        for (size_t i = 0; i + 1 < cplus.size() && !both_polarities; ++i)
            if (var_of(cplus[i]) == var_of(cplus[i + 1])) both_polarities = true;
        if (!both_polarities && db.conflicts(cplus)) {
            bool clean = true;
            for (Var v : sub_pivots[id]) {
                for (Lit l : cplus)
                    if (var_of(l) == v) {
                        clean = false;
                        break;
                    }
                if (!clean) break;
            }
            if (!clean) {
                if (out.ok)
                    out = Verdict::fail(id, "branches past a unit-propagation conflict, "
                                            "resolving on a falsified variable");
            } else if (!input[id]) {
                out.flagged.push_back(id);
            }
        }
        if (input[id]) db.add(*clauses[id]);
    }
    return out;
}

}  // namespace poolres
