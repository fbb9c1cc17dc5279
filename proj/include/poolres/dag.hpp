#pragma once

// Dag-shaped regular derivations (the intermediate form produced by the
// refutation builders) and their conversion to tree shape: plain depth-first
// unfolding with lemma references for the pool engine, and the re-expansion
// scheme that leaves only input lemmas for the regRTI engine.

#include "poolres/proof.hpp"

namespace poolres {

struct DagNode {
    enum class Kind : uint8_t { Axiom, External, Step };
    Kind kind = Kind::Axiom;
    Clause clause;
    uint32_t axiom_index = 0;    // Axiom: formula clause index
    uint64_t external = 0;       // External: handle of an earlier learned clause
    uint32_t left = 0, right = 0;
    Var pivot = 0;
    int64_t tag = -1;            // caller annotation
};

struct Dag {
    std::vector<DagNode> nodes;
    uint32_t root = 0;

    uint32_t add_axiom(Clause c, uint32_t formula_idx, int64_t tag = -1) {
        DagNode n;
        n.kind = DagNode::Kind::Axiom;
        n.clause = std::move(c);
        n.axiom_index = formula_idx;
        n.tag = tag;
        nodes.push_back(std::move(n));
        return (uint32_t)nodes.size() - 1;
    }
    uint32_t add_external(Clause c, uint64_t target) {
        DagNode n;
        n.kind = DagNode::Kind::External;
        n.clause = std::move(c);
        n.external = target;
        nodes.push_back(std::move(n));
        return (uint32_t)nodes.size() - 1;
    }
    uint32_t add_step(uint32_t l, uint32_t r, Var pivot) {
        DagNode n;
        n.kind = DagNode::Kind::Step;
        n.clause = resolve_any(nodes[l].clause, nodes[r].clause, pivot);
        n.left = l;
        n.right = r;
        n.pivot = pivot;
        nodes.push_back(std::move(n));
        return (uint32_t)nodes.size() - 1;
    }

    size_t size() const { return nodes.size(); }

    // Longest path, in edges, from the root to a leaf.
    size_t height() const {
        std::vector<uint32_t> h(nodes.size(), 0);
        size_t best = 0;
        for (uint32_t id = 0; id < nodes.size(); ++id) {
            const DagNode& n = nodes[id];
            if (n.kind == DagNode::Kind::Step) {
                h[id] = 1 + std::max(h[n.left], h[n.right]);
                best = std::max(best, (size_t)h[id]);
            }
        }
        return best;
    }
};

// Variable-set bitsets over a small domain.
class VarSet {
  public:
    explicit VarSet(Var num_vars = 0) : words_((num_vars + 64) / 64, 0) {}
    void insert(Var v) { words_[v / 64] |= 1ull << (v % 64); }
    bool contains(Var v) const { return words_[v / 64] >> (v % 64) & 1; }
    void merge(const VarSet& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    }

  private:
    std::vector<uint64_t> words_;
};

// For each node, the set of pivot variables occurring strictly below it on
// some path toward the root.
inline std::vector<VarSet> pivots_below(const Dag& d, Var num_vars) {
    std::vector<VarSet> below(d.size(), VarSet(num_vars));
    for (uint32_t id = (uint32_t)d.size(); id-- > 0;) {
        const DagNode& n = d.nodes[id];
        if (n.kind != DagNode::Kind::Step) continue;
        VarSet child = below[id];
        child.insert(n.pivot);
        below[n.left].merge(child);
        below[n.right].merge(child);
    }
    return below;
}

inline bool dag_is_regular(const Dag& d, Var num_vars) {
    auto below = pivots_below(d, num_vars);
    for (uint32_t id = 0; id < d.size(); ++id) {
        const DagNode& n = d.nodes[id];
        if (n.kind == DagNode::Kind::Step && below[id].contains(n.pivot)) return false;
    }
    return true;
}

// The emitter interface used by the conversions. Handles are opaque; the
// target tree assigns them. `step` receives already-emitted child handles in
// left/right order; emission order is postorder.
//
// Conversion result bookkeeping for the input-lemma property.
struct Emitted {
    uint64_t handle = 0;
    bool leaf_like = false;  // axiom or lemma leaf
    bool input = false;      // subderivation is an input derivation
};

using StepEmitHook = std::function<void(uint32_t dag_node, uint64_t handle)>;

// Depth-first unfolding with lemma references to the first expansion of each
// shared step. Lemmas may reference arbitrary earlier clauses, which is
// exactly the pool (regRTL) discipline.
template <class Emitter>
Emitted dag_to_tree_pool(const Dag& d, Emitter& em, const StepEmitHook& on_step = {}) {
    std::vector<std::optional<uint64_t>> first(d.size());
    auto rec = [&](auto&& self, uint32_t u) -> Emitted {
        const DagNode& n = d.nodes[u];
        switch (n.kind) {
            case DagNode::Kind::Axiom:
                return {em.emit_axiom(n.axiom_index, n.clause), true, true};
            case DagNode::Kind::External:
                return {em.emit_lemma(n.external, n.clause), true, true};
            case DagNode::Kind::Step: {
                if (first[u]) return {em.emit_lemma(*first[u], n.clause), true, true};
                Emitted l = self(self, n.left);
                Emitted r = self(self, n.right);
                uint64_t h = em.emit_step(l.handle, r.handle, n.pivot, n.clause);
                first[u] = h;
                if (on_step) on_step(u, h);
                bool input = (l.leaf_like || r.leaf_like) && l.input && r.input;
                return {h, false, input};
            }
        }
        throw domain_error("bad dag node");
    };
    return rec(rec, d.root);
}

// Conversion to a tree whose lemmas are all input lemmas. A shared step may
// be referenced as a lemma only once some expansion of it was an input
// derivation; until then it is re-expanded. Re-expansions terminate because
// every expansion whose children are all leaves or learned is itself input.
// Output size is asserted against twice size times height.
template <class Emitter>
Emitted dag_to_tree_input_lemmas(const Dag& d, Var num_vars, Emitter& em,
                                 const StepEmitHook& on_step = {}) {
    if (!dag_is_regular(d, num_vars))
        throw domain_error("refusing to convert an irregular dag derivation");
    std::vector<std::optional<uint64_t>> learned(d.size());
    size_t emitted = 0;
    const size_t bound = 2 * d.size() * std::max<size_t>(d.height(), 1);
    auto rec = [&](auto&& self, uint32_t u) -> Emitted {
        if (emitted > bound) throw domain_error("input-lemma conversion exceeded its size bound");
        const DagNode& n = d.nodes[u];
        switch (n.kind) {
            case DagNode::Kind::Axiom:
                ++emitted;
                return {em.emit_axiom(n.axiom_index, n.clause), true, true};
            case DagNode::Kind::External:
                ++emitted;
                return {em.emit_lemma(n.external, n.clause), true, true};
            case DagNode::Kind::Step: {
                if (learned[u]) {
                    ++emitted;
                    return {em.emit_lemma(*learned[u], n.clause), true, true};
                }
                Emitted l = self(self, n.left);
                Emitted r = self(self, n.right);
                uint64_t h = em.emit_step(l.handle, r.handle, n.pivot, n.clause);
                ++emitted;
                if (on_step) on_step(u, h);
                bool input = (l.leaf_like || r.leaf_like) && l.input && r.input;
                if (input) learned[u] = h;
                return {h, false, input};
            }
        }
        throw domain_error("bad dag node");
    };
    Emitted root = rec(rec, d.root);
    if (emitted > bound) throw domain_error("input-lemma conversion exceeded its size bound");
    return root;
}

// Standalone emitter building a Proof.
struct ProofEmitter {
    Proof proof;
    uint64_t emit_axiom(uint32_t idx, const Clause&) { return proof.add_axiom(idx); }
    uint64_t emit_lemma(uint64_t target, const Clause&) {
        return proof.add_lemma((uint32_t)target);
    }
    uint64_t emit_step(uint64_t l, uint64_t r, Var pivot, const Clause&) {
        return proof.add_step((uint32_t)l, (uint32_t)r, pivot);
    }
};

inline Proof dag_to_proof_input_lemmas(const Dag& d, Var num_vars) {
    ProofEmitter em;
    dag_to_tree_input_lemmas(d, num_vars, em);
    return std::move(em.proof);
}

inline Proof dag_to_proof_pool(const Dag& d) {
    ProofEmitter em;
    dag_to_tree_pool(d, em);
    return std::move(em.proof);
}

}  // namespace poolres
