#pragma once

// The mutable proof tree shared by the left-to-right refutation engines.
// Unfinished leaves are placeholders to be replaced by spliced-in
// subderivations; literals introduced by guarded axioms are threaded down
// toward the root until a clause already containing them absorbs the change.

#include <map>
#include <set>

#include "poolres/dag.hpp"

namespace poolres {

constexpr uint32_t kNoNode = UINT32_MAX;

struct LRNode {
    NodeKind kind = NodeKind::Axiom;
    bool unfinished = false;
    Clause clause;
    uint32_t a = 0, b = 0;  // step children / axiom index / lemma target
    Var pivot = 0;
    uint32_t parent = kNoNode;
    uint8_t side = 0;  // which child of the parent
    uint32_t depth = 0;
};

class LRTree {
  public:
    std::vector<LRNode> nodes;
    uint32_t root = kNoNode;

    uint32_t make_unfinished(Clause c) {
        LRNode n;
        n.kind = NodeKind::Axiom;
        n.unfinished = true;
        n.clause = std::move(c);
        nodes.push_back(std::move(n));
        return last();
    }
    uint32_t make_axiom(uint32_t idx, Clause c) {
        LRNode n;
        n.kind = NodeKind::Axiom;
        n.a = idx;
        n.clause = std::move(c);
        nodes.push_back(std::move(n));
        return last();
    }
    uint32_t make_lemma(uint32_t target, Clause c) {
        LRNode n;
        n.kind = NodeKind::Lemma;
        n.a = target;
        n.clause = std::move(c);
        nodes.push_back(std::move(n));
        return last();
    }
    uint32_t make_step(uint32_t l, uint32_t r, Var pivot) {
        LRNode n;
        n.kind = NodeKind::Step;
        n.clause = resolve_any(nodes[l].clause, nodes[r].clause, pivot);
        n.a = l;
        n.b = r;
        n.pivot = pivot;
        nodes.push_back(std::move(n));
        uint32_t id = last();
        link(l, id, 0);
        link(r, id, 1);
        return id;
    }

    void set_root(uint32_t id) {
        root = id;
        nodes[id].parent = kNoNode;
        refresh_depths(id);
    }

    // Replace the unfinished leaf `leaf` by the finished subtree rooted at
    // `sub`: the subtree root moves into the leaf's slot so the leaf id
    // stays valid for its parent.
    void splice(uint32_t leaf, uint32_t sub) {
        assert(nodes[leaf].unfinished);
        LRNode& dst = nodes[leaf];
        LRNode src = nodes[sub];  // copy
        dst.kind = src.kind;
        dst.unfinished = false;
        dst.clause = std::move(src.clause);
        dst.a = src.a;
        dst.b = src.b;
        dst.pivot = src.pivot;
        nodes[sub].kind = NodeKind::Axiom;  // leave the vacated slot inert
        nodes[sub].parent = kNoNode;
        if (dst.kind == NodeKind::Step) {
            link(dst.a, leaf, 0);
            link(dst.b, leaf, 1);
        }
        refresh_depths(leaf);
    }

    // Add `lit` to the clauses strictly below `from`, stopping at the first
    // clause that already contains it. Inference validity is preserved: the
    // literal rides along as a side literal, and the stop clause absorbs it.
    void thread_down(uint32_t from, Lit lit) {
        uint32_t q = nodes[from].parent;
        while (q != kNoNode) {
            if (nodes[q].clause.contains(lit)) return;  // absorbed
            if (nodes[q].kind == NodeKind::Step && nodes[q].pivot == var_of(lit))
                throw domain_error("threaded literal meets a pivot on its own variable");
            if (nodes[q].clause.contains(-lit))
                throw domain_error("threading would create a tautological clause");
            auto lits = nodes[q].clause.lits();
            lits.push_back(lit);
            nodes[q].clause = Clause::from_lits(std::move(lits));
            q = nodes[q].parent;
        }
        throw domain_error("threaded literal reached the root without absorption");
    }

    // Strict left-of in the final postorder: descendants precede ancestors,
    // left subtrees precede right subtrees.
    bool post_less(uint32_t x, uint32_t y) const {
        if (x == y) return false;
        uint32_t dx = nodes[x].depth, dy = nodes[y].depth;
        uint32_t cx = x, cy = y;
        uint8_t sx = 0, sy = 0;
        while (dx > dy) {
            sx = nodes[cx].side;
            cx = nodes[cx].parent;
            --dx;
        }
        if (cx == y) return true;  // x is a descendant of y
        while (dy > dx) {
            sy = nodes[cy].side;
            cy = nodes[cy].parent;
            --dy;
        }
        if (cy == x) return false;  // y is a descendant of x
        while (nodes[cx].parent != nodes[cy].parent) {
            sx = nodes[cx].side;
            cx = nodes[cx].parent;
            sy = nodes[cy].side;
            cy = nodes[cy].parent;
        }
        sx = nodes[cx].side;
        sy = nodes[cy].side;
        return sx < sy;
    }

    // Literals on the branch from the root up to and including `node`,
    // walked leaf-to-root: `nearest` keeps the occurrence closest to the
    // node for each variable.
    struct BranchInfo {
        std::vector<Lit> cplus;          // deduplicated
        std::map<Var, Lit> nearest;
    };
    BranchInfo branch_info(uint32_t node) const {
        BranchInfo b;
        std::set<Lit> seen;
        for (uint32_t q = node; q != kNoNode; q = nodes[q].parent)
            for (Lit l : nodes[q].clause.lits()) {
                if (seen.insert(l).second) b.cplus.push_back(l);
                b.nearest.emplace(var_of(l), l);
            }
        return b;
    }

    // Emit the finished tree as a postorder Proof.
    Proof finalize() const {
        Proof p;
        std::vector<uint32_t> mapping(nodes.size(), kNoNode);
        struct Frame {
            uint32_t id;
            int phase;
        };
        std::vector<Frame> stack{{root, 0}};
        while (!stack.empty()) {
            auto& [id, phase] = stack.back();
            const LRNode& n = nodes[id];
            if (n.unfinished) throw domain_error("finalize with unfinished leaves");
            if (n.kind != NodeKind::Step) {
                if (n.kind == NodeKind::Axiom) {
                    mapping[id] = p.add_axiom(n.a);
                } else {
                    if (mapping[n.a] == kNoNode)
                        throw domain_error("lemma target not yet emitted");
                    mapping[id] = p.add_lemma(mapping[n.a]);
                }
                stack.pop_back();
                continue;
            }
            if (phase == 0) {
                phase = 1;
                stack.push_back({n.a, 0});
            } else if (phase == 1) {
                phase = 2;
                stack.push_back({n.b, 0});
            } else {
                mapping[id] = p.add_step(mapping[n.a], mapping[n.b], n.pivot);
                stack.pop_back();
            }
        }
        return p;
    }

    // Re-derive every step clause and re-check path regularity; used as a
    // checkpoint assertion while a refutation is under construction.
    void validate(Var num_vars) const {
        std::vector<uint32_t> seen(num_vars + 1, 0);
        struct Frame {
            uint32_t id;
            int phase;
        };
        std::vector<Frame> stack{{root, 0}};
        while (!stack.empty()) {
            auto& [id, phase] = stack.back();
            const LRNode& n = nodes[id];
            if (n.kind != NodeKind::Step) {
                if (n.kind == NodeKind::Lemma && !(nodes[n.a].clause == n.clause))
                    throw domain_error("lemma clause differs from target");
                stack.pop_back();
                continue;
            }
            if (phase == 0) {
                Clause want = resolve_any(nodes[n.a].clause, nodes[n.b].clause, n.pivot);
                if (!(want == n.clause)) throw domain_error("stored clause differs from resolvent");
                if (seen[n.pivot]) throw domain_error("pivot repeats along a path");
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
    }

  private:
    uint32_t last() const { return (uint32_t)nodes.size() - 1; }

    void link(uint32_t child, uint32_t parent, uint8_t side) {
        nodes[child].parent = parent;
        nodes[child].side = side;
    }

  public:
    void refresh_depths(uint32_t from) {
        std::vector<uint32_t> stack{from};
        nodes[from].depth = nodes[from].parent == kNoNode ? 0 : nodes[nodes[from].parent].depth + 1;
        while (!stack.empty()) {
            uint32_t id = stack.back();
            stack.pop_back();
            if (nodes[id].kind == NodeKind::Step) {
                nodes[nodes[id].a].depth = nodes[id].depth + 1;
                nodes[nodes[id].b].depth = nodes[id].depth + 1;
                stack.push_back(nodes[id].a);
                stack.push_back(nodes[id].b);
            }
        }
    }
};

// Emitter gluing the dag-to-tree conversions onto an LRTree. External dag
// nodes become lemma references to already-learned tree nodes.
struct LRTreeEmitter {
    LRTree& tree;
    std::function<void(uint64_t)> on_node;  // optional: observe emissions

    uint64_t emit_axiom(uint32_t idx, const Clause& c) {
        uint32_t h = tree.make_axiom(idx, c);
        if (on_node) on_node(h);
        return h;
    }
    uint64_t emit_lemma(uint64_t target, const Clause& c) {
        uint32_t h = tree.make_lemma((uint32_t)target, c);
        if (on_node) on_node(h);
        return h;
    }
    uint64_t emit_step(uint64_t l, uint64_t r, Var pivot, const Clause&) {
        uint32_t h = tree.make_step((uint32_t)l, (uint32_t)r, pivot);
        if (on_node) on_node(h);
        return h;
    }
};

}  // namespace poolres
