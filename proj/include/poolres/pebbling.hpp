#pragma once

// Pebbling formulas over pointed dags, their xor-ified lifts, and the
// guarded variant GPeb: every xor-ified clause is doubled with a fresh guard
// literal chosen by a map rho.

#include <random>

#include "poolres/graphs.hpp"

namespace poolres {

// Variables x_{u,i} for vertex u in [n], i in [1..k].
class XorVars {
  public:
    XorVars(int n, int k) : n_(n), k_(k) {
        if (k < 1) throw domain_error("xor width must be >= 1");
    }
    int n() const { return n_; }
    int k() const { return k_; }
    Var count() const { return (Var)(n_ * k_); }
    Var index(int u, int i) const {
        assert(u >= 0 && u < n_ && i >= 1 && i <= k_);
        return (Var)(u * k_ + i);
    }
    int vertex_of(Var v) const { return (int)((v - 1) / k_); }
    int slot_of(Var v) const { return (int)((v - 1) % k_) + 1; }
    std::string name(Var v) const {
        return "x_{" + std::to_string(vertex_of(v)) + "," + std::to_string(slot_of(v)) + "}";
    }
    void apply_names(CnfFormula& f) const {
        for (Var v = 1; v <= count(); ++v) f.set_name(v, name(v));
    }

  private:
    int n_, k_;
};

// Sign vectors over {+1,-1}^k, enumerated by k-bit masks (bit i-1 set means
// x_{u,i} appears negated).
inline Clause xor_block_clause(const XorVars& xv, int u, uint32_t mask) {
    std::vector<Lit> lits;
    for (int i = 1; i <= xv.k(); ++i) {
        Lit l = (Lit)xv.index(u, i);
        lits.push_back((mask >> (i - 1)) & 1 ? -l : l);
    }
    return Clause::from_lits(std::move(lits));
}

inline bool odd_parity(uint32_t mask) { return __builtin_popcount(mask) & 1; }

// The 2^{k-1} clauses translating the positive literal x_u: an even number of
// negated occurrences.
inline std::vector<Clause> xorify_pos(const XorVars& xv, int u) {
    std::vector<Clause> out;
    for (uint32_t m = 0; m < (1u << xv.k()); ++m)
        if (!odd_parity(m)) out.push_back(xor_block_clause(xv, u, m));
    return out;
}

// The 2^{k-1} clauses translating ~x_u: an odd number of negations.
inline std::vector<Clause> xorify_neg(const XorVars& xv, int u) {
    std::vector<Clause> out;
    for (uint32_t m = 0; m < (1u << xv.k()); ++m)
        if (odd_parity(m)) out.push_back(xor_block_clause(xv, u, m));
    return out;
}

// All 2^{(k-1)L} translations of a clause over vertex literals: one block
// choice per literal, unioned. Vertex literals use 1-based dimacs encoding
// over vertex ids + 1.
inline std::vector<Clause> xorify_clause(const XorVars& xv, const std::vector<Lit>& vertex_lits,
                                         size_t pos = 0, const std::vector<Lit>& acc = {}) {
    if (vertex_lits.empty()) throw domain_error("cannot xorify the empty clause");
    if (pos == vertex_lits.size()) return {Clause::from_lits(acc)};
    std::vector<Clause> out;
    Lit z = vertex_lits[pos];
    int u = (int)var_of(z) - 1;
    for (uint32_t m = 0; m < (1u << xv.k()); ++m) {
        if (odd_parity(m) != !positive(z)) continue;
        Clause block = xor_block_clause(xv, u, m);
        std::vector<Lit> next = acc;
        for (Lit l : block.lits()) next.push_back(l);
        auto sub = xorify_clause(xv, vertex_lits, pos + 1, next);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

// Peb(G): unit clauses for sources, implication clauses for in-degree-2
// vertices, and the negated sink unit. One variable per vertex (id + 1).
inline CnfFormula gen_peb(const PointedDag& g) {
    CnfFormula f;
    f.num_vars = (Var)g.n();
    for (int v = 0; v < g.n(); ++v) f.set_name((Var)(v + 1), "x_" + std::to_string(v));
    for (int s : g.sources()) f.add_clause(Clause::from_lits({(Lit)(s + 1)}));
    for (int w = 0; w < g.n(); ++w)
        if (!g.is_source(w)) {
            auto& p = g.preds(w);
            f.add_clause(Clause::from_lits({-(Lit)(p[0] + 1), -(Lit)(p[1] + 1), (Lit)(w + 1)}));
        }
    f.add_clause(Clause::from_lits({-(Lit)(g.sink() + 1)}));
    return f;
}

// Vertex-level clause of a Peb(G) clause index, used when lifting.
inline std::vector<Lit> peb_vertex_lits(const PointedDag& g, size_t clause_idx) {
    CnfFormula peb = gen_peb(g);
    return peb.clauses.at(clause_idx).lits();
}

// Peb^{k xor}(G): every Peb(G) clause replaced by its 2^{(k-1)L} lift.
inline CnfFormula gen_peb_xor(const PointedDag& g, int k) {
    XorVars xv(g.n(), k);
    CnfFormula peb = gen_peb(g);
    CnfFormula f;
    f.num_vars = xv.count();
    xv.apply_names(f);
    for (const Clause& c : peb.clauses)
        for (Clause& lifted : xorify_clause(xv, c.lits())) f.add_clause(std::move(lifted));
    return f;
}

// rho assigns each Peb^{k xor} clause a guard variable not occurring in it.
// A clause that uses every variable of the formula admits no guard (this
// happens only on graphs with at most three vertices); such a clause is
// recorded as unguarded and emitted once, as itself.
struct GuardMap {
    std::vector<Var> guard;  // indexed by clause position in gen_peb_xor; 0 = unguarded

    static GuardMap validate(const CnfFormula& peb_xor, std::vector<Var> guards) {
        if (guards.size() != peb_xor.clauses.size())
            throw domain_error("guard map must cover every clause");
        for (size_t i = 0; i < guards.size(); ++i) {
            if (guards[i] == 0) {
                if (peb_xor.clauses[i].size() < peb_xor.num_vars)
                    throw domain_error("clause " + std::to_string(i) +
                                       " left unguarded although a guard exists");
            } else if (peb_xor.clauses[i].contains_var(guards[i])) {
                throw domain_error("guard of clause " + std::to_string(i) +
                                   " occurs in the clause");
            }
        }
        return GuardMap{std::move(guards)};
    }
};

inline GuardMap make_guard_map(const PointedDag& g, int k, uint64_t seed) {
    CnfFormula peb_xor = gen_peb_xor(g, k);
    std::mt19937_64 rng(seed);
    std::vector<Var> guards;
    size_t guarded = 0;
    for (const Clause& c : peb_xor.clauses) {
        if (c.size() >= peb_xor.num_vars) {
            guards.push_back(0);
            continue;
        }
        while (true) {
            Var v = (Var)(rng() % peb_xor.num_vars) + 1;
            if (!c.contains_var(v)) {
                guards.push_back(v);
                ++guarded;
                break;
            }
        }
    }
    if (guarded == 0)
        throw domain_error("no clause admits a guard variable on this instance");
    return GuardMap::validate(peb_xor, std::move(guards));
}

// GPeb^{k xor}(G): each lifted clause doubled with its guard literal, the
// positive variant first; unguardable clauses appear once, as themselves.
inline CnfFormula gen_gpeb(const PointedDag& g, int k, const GuardMap& rho) {
    CnfFormula peb_xor = gen_peb_xor(g, k);
    GuardMap::validate(peb_xor, rho.guard);
    CnfFormula f;
    f.num_vars = peb_xor.num_vars;
    f.var_names = peb_xor.var_names;
    for (size_t i = 0; i < peb_xor.clauses.size(); ++i) {
        if (rho.guard[i] == 0) {
            f.add_clause(peb_xor.clauses[i]);
            continue;
        }
        std::vector<Lit> pos = peb_xor.clauses[i].lits(), negv = peb_xor.clauses[i].lits();
        pos.push_back((Lit)rho.guard[i]);
        negv.push_back(-(Lit)rho.guard[i]);
        f.add_clause(Clause::from_lits(std::move(pos)));
        f.add_clause(Clause::from_lits(std::move(negv)));
    }
    return f;
}

// Positions of a lifted clause's emission in gen_gpeb: (index of the
// positive-guard copy, index of the negative copy), or a single index twice
// for an unguarded clause.
inline std::pair<int, int> gpeb_clause_indices(const GuardMap& rho, size_t peb_xor_index) {
    int at = 0;
    for (size_t i = 0; i < peb_xor_index; ++i) at += rho.guard[i] == 0 ? 1 : 2;
    if (rho.guard[peb_xor_index] == 0) return {at, at};
    return {at, at + 1};
}

}  // namespace poolres
