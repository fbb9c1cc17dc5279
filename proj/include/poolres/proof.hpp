#pragma once

// Tree-shaped refutations with lemma leaves, stored as postorder arrays.
// Clauses are not stored per node; checkers and writers re-derive them from
// the axioms and pivots.

#include <functional>
#include <optional>

#include "poolres/core.hpp"

namespace poolres {

enum class Rule : uint8_t { Resolution, Degenerate, WResolution };
enum class NodeKind : uint8_t { Axiom, Lemma, Step };

struct ProofNode {
    NodeKind kind = NodeKind::Axiom;
    Rule rule = Rule::Resolution;
    uint32_t a = 0;      // Axiom: formula clause index. Lemma: target node id.
    uint32_t b = 0;      // Step: right child id (a = left child id).
    Var pivot = 0;       // Step only.
};

// Nodes in postorder, ids 0-based; for every step, all ids in the left
// subtree precede all ids in the right subtree precede the step itself.
// The root is the last node.
struct Proof {
    std::vector<ProofNode> nodes;

    size_t size() const { return nodes.size(); }
    uint32_t root() const { return (uint32_t)nodes.size() - 1; }

    uint32_t add_axiom(uint32_t clause_idx) {
        nodes.push_back({NodeKind::Axiom, Rule::Resolution, clause_idx, 0, 0});
        return (uint32_t)nodes.size() - 1;
    }
    uint32_t add_lemma(uint32_t target) {
        nodes.push_back({NodeKind::Lemma, Rule::Resolution, target, 0, 0});
        return (uint32_t)nodes.size() - 1;
    }
    uint32_t add_step(uint32_t left, uint32_t right, Var pivot, Rule rule = Rule::Resolution) {
        nodes.push_back({NodeKind::Step, rule, left, right, pivot});
        return (uint32_t)nodes.size() - 1;
    }
};

// --- inference rules ---------------------------------------------------

// Standard resolution: pivot positive in a, negative in b, neither clause
// containing the opposite occurrence. Tautological resolvents are rejected.
inline Clause resolve(const Clause& a, const Clause& b, Var x) {
    Lit p = (Lit)x;
    if (!a.contains(p) || a.contains(-p))
        throw domain_error("resolution: pivot " + std::to_string(x) +
                           " must occur positively in the left premise");
    if (!b.contains(-p) || b.contains(p))
        throw domain_error("resolution: pivot " + std::to_string(x) +
                           " must occur negatively in the right premise");
    std::vector<Lit> lits;
    for (Lit l : a.lits())
        if (l != p) lits.push_back(l);
    for (Lit l : b.lits())
        if (l != -p) lits.push_back(l);
    return Clause::from_lits(std::move(lits));  // throws on tautology
}

// Orientation-insensitive helper: picks which premise holds the positive
// occurrence.
inline Clause resolve_any(const Clause& a, const Clause& b, Var x) {
    if (a.contains((Lit)x)) return resolve(a, b, x);
    return resolve(b, a, x);
}

// Degenerate resolution: total. Falls back to a premise when pivot
// occurrences are missing, with a fixed tiebreak when both are.
inline Clause degenerate_resolve(const Clause& a, const Clause& b, Var x) {
    Lit p = (Lit)x;
    bool in_a = a.contains(p), in_b = b.contains(-p);
    if (a.contains(-p) || b.contains(p))
        throw domain_error("degenerate resolution: opposite pivot occurrence in premise");
    if (in_a && in_b) return resolve(a, b, x);
    if (in_a) return b;
    if (in_b) return a;
    return Clause::size_lex_less(a, b) ? a : b;
}

// w-resolution: missing pivot occurrences are treated as phantom literals.
inline Clause w_resolve(const Clause& a, const Clause& b, Var x) {
    Lit p = (Lit)x;
    if (a.contains(-p))
        throw domain_error("w-resolution: negated pivot occurs in the left premise");
    if (b.contains(p))
        throw domain_error("w-resolution: pivot occurs in the right premise");
    std::vector<Lit> lits;
    for (Lit l : a.lits())
        if (l != p) lits.push_back(l);
    for (Lit l : b.lits())
        if (l != -p) lits.push_back(l);
    return Clause::from_lits(std::move(lits));
}

// Checking semantics: plain resolution ignores which premise carries the
// positive pivot occurrence; the degenerate and w-resolution variants are
// orientation-sensitive by definition.
inline Clause apply_rule(Rule r, const Clause& a, const Clause& b, Var x) {
    switch (r) {
        case Rule::Resolution: return resolve_any(a, b, x);
        case Rule::Degenerate: return degenerate_resolve(a, b, x);
        case Rule::WResolution: return w_resolve(a, b, x);
    }
    throw domain_error("unknown rule");
}

// --- clause evaluation ---------------------------------------------------

// Re-derive every node clause in postorder. Memory stays proportional to the
// proof height plus the lemma-target count: a step's child clauses are freed
// once consumed, lemma targets are kept until their last reference.
inline void for_each_clause(const Proof& p, const CnfFormula& f,
                            const std::function<void(uint32_t, const Clause&)>& visit) {
    // needs[x] = structural parent (1, except the root) + later lemma refs
    std::vector<uint32_t> needs(p.size(), 0);
    for (uint32_t id = 0; id < p.size(); ++id) {
        const ProofNode& n = p.nodes[id];
        if (n.kind == NodeKind::Lemma) {
            if (n.a >= id)
                throw domain_error("lemma at node " + std::to_string(id) +
                                   " references a later node");
            ++needs[n.a];
        } else if (n.kind == NodeKind::Step) {
            ++needs[n.a];
            ++needs[n.b];
        }
    }
    std::vector<std::optional<Clause>> live(p.size());
    auto get = [&](uint32_t id) -> const Clause& {
        if (!live[id]) throw domain_error("internal: clause of node dropped early");
        return *live[id];
    };
    auto release = [&](uint32_t id) {
        if (needs[id] > 0 && --needs[id] == 0) live[id].reset();
    };
    for (uint32_t id = 0; id < p.size(); ++id) {
        const ProofNode& n = p.nodes[id];
        Clause c;
        switch (n.kind) {
            case NodeKind::Axiom:
                if (n.a >= f.clauses.size())
                    throw domain_error("axiom index out of range at node " + std::to_string(id));
                c = f.clauses[n.a];
                break;
            case NodeKind::Lemma: c = get(n.a); break;
            case NodeKind::Step: c = apply_rule(n.rule, get(n.a), get(n.b), n.pivot); break;
        }
        visit(id, c);
        live[id] = std::move(c);
        if (n.kind == NodeKind::Lemma)
            release(n.a);
        else if (n.kind == NodeKind::Step) {
            release(n.a);
            release(n.b);
        }
    }
}

inline Clause clause_of_root(const Proof& p, const CnfFormula& f) {
    Clause root;
    for_each_clause(p, f, [&](uint32_t id, const Clause& c) {
        if (id == p.root()) root = c;
    });
    return root;
}

// --- statistics ----------------------------------------------------------

struct ProofStats {
    size_t node_count = 0;
    size_t inference_count = 0;
    size_t height = 0;  // longest root-to-leaf path, in edges
    size_t max_clause_width = 0;
    size_t lemma_count = 0;
    size_t input_lemma_count = 0;
};

// Bottom-up: is the subderivation rooted at each node an input derivation,
// i.e. does every step in it have at least one axiom or lemma child?
inline std::vector<bool> input_derived_flags(const Proof& p) {
    std::vector<bool> input(p.size(), true);
    for (uint32_t id = 0; id < p.size(); ++id) {
        const ProofNode& n = p.nodes[id];
        if (n.kind != NodeKind::Step) continue;
        bool leaf_child = p.nodes[n.a].kind != NodeKind::Step ||
                          p.nodes[n.b].kind != NodeKind::Step;
        input[id] = leaf_child && input[n.a] && input[n.b];
    }
    return input;
}

inline ProofStats stats(const Proof& p, const CnfFormula& f) {
    ProofStats s;
    s.node_count = p.size();
    std::vector<uint32_t> depth(p.size(), 0);
    for (uint32_t id = 0; id < p.size(); ++id) {
        const ProofNode& n = p.nodes[id];
        if (n.kind == NodeKind::Step) {
            ++s.inference_count;
            depth[id] = 1 + std::max(depth[n.a], depth[n.b]);
            s.height = std::max(s.height, (size_t)depth[id]);
        }
    }
    auto input = input_derived_flags(p);
    for (uint32_t id = 0; id < p.size(); ++id) {
        const ProofNode& n = p.nodes[id];
        if (n.kind == NodeKind::Lemma) {
            ++s.lemma_count;
            if (input[n.a]) ++s.input_lemma_count;
        }
    }
    for_each_clause(p, f, [&](uint32_t, const Clause& c) {
        s.max_clause_width = std::max(s.max_clause_width, c.size());
    });
    return s;
}

}  // namespace poolres
