#pragma once

// Partial specifications of partial orders, bipartite partial orders, and the
// clause family GT_{pi,n} relative to a bipartite partial order.

#include <optional>
#include <set>

#include "poolres/core.hpp"

namespace poolres {

using PairSet = std::set<std::pair<int, int>>;

// A set of ordered pairs consistent with some partial order (checked lazily:
// the transitive closure must be irreflexive).
struct PartialSpec {
    int n = 0;
    PairSet pairs;

    PartialSpec() = default;
    PartialSpec(int n_, PairSet pairs_) : n(n_), pairs(std::move(pairs_)) {}
};

inline PairSet transitive_closure(const PartialSpec& tau) {
    // Plain iterative closure; n stays small here.
    std::vector<std::vector<bool>> reach(tau.n, std::vector<bool>(tau.n, false));
    for (auto [a, b] : tau.pairs) reach[a][b] = true;
    for (int k = 0; k < tau.n; ++k)
        for (int a = 0; a < tau.n; ++a)
            if (reach[a][k])
                for (int b = 0; b < tau.n; ++b)
                    if (reach[k][b]) reach[a][b] = true;
    PairSet out;
    for (int a = 0; a < tau.n; ++a) {
        if (reach[a][a])
            throw domain_error("inconsistent partial specification: cycle through " +
                               std::to_string(a));
        for (int b = 0; b < tau.n; ++b)
            if (reach[a][b]) out.emplace(a, b);
    }
    return out;
}

// A binary relation whose domain and range do not intersect. M_pi is the set
// of minimal elements: everything outside the range, isolated points included.
struct BipartitePartialOrder {
    int n = 0;
    PairSet pairs;
    std::vector<int> minimal;  // M_pi, ascending

    BipartitePartialOrder() = default;

    static BipartitePartialOrder from_pairs(int n, PairSet pairs) {
        std::set<int> dom, rng;
        for (auto [a, b] : pairs) {
            dom.insert(a);
            rng.insert(b);
        }
        for (int d : dom)
            if (rng.count(d))
                throw domain_error("not bipartite: " + std::to_string(d) +
                                   " is in both domain and range");
        BipartitePartialOrder pi;
        pi.n = n;
        pi.pairs = std::move(pairs);
        for (int v = 0; v < n; ++v)
            if (!rng.count(v)) pi.minimal.push_back(v);
        return pi;
    }

    bool less(int a, int b) const { return pairs.count({a, b}) != 0; }
    bool is_minimal(int v) const {
        return std::binary_search(minimal.begin(), minimal.end(), v);
    }
    bool empty() const { return pairs.empty(); }

    friend bool operator==(const BipartitePartialOrder& a, const BipartitePartialOrder& b) {
        return a.n == b.n && a.pairs == b.pairs;
    }
};

// The bipartite partial order associated with tau: pairs (i,j) with i
// tau-minimal and i below j in the transitive closure. Ordering information
// about non-minimal elements is forgotten.
inline BipartitePartialOrder associated_bpo(const PartialSpec& tau) {
    PairSet closure = transitive_closure(tau);
    std::vector<bool> is_min(tau.n, true);
    for (auto [a, b] : tau.pairs) is_min[b] = false;
    PairSet pairs;
    for (auto [a, b] : closure)
        if (is_min[a]) pairs.emplace(a, b);
    return BipartitePartialOrder::from_pairs(tau.n, std::move(pairs));
}

// The clause asserting that pi cannot be extended: one negated literal per
// ordered pair of pi.
inline Clause neg_pi_clause(const BipartitePartialOrder& pi, const OrderVars& ov) {
    std::vector<Lit> lits;
    for (auto [a, b] : pi.pairs) lits.push_back(-ov.lit(a, b));
    return Clause::from_lits(std::move(lits));
}

// The transitivity clause T_{i,j,k} = ~x_{i,j} v ~x_{j,k} v ~x_{k,i}.
inline Clause transitivity_clause(const OrderVars& ov, int i, int j, int k) {
    return Clause::from_lits({-ov.lit(i, j), -ov.lit(j, k), -ov.lit(k, i)});
}

// The clause of type (alpha) for element i: some j precedes i.
inline Clause alpha_clause(const OrderVars& ov, int i) {
    std::vector<Lit> lits;
    for (int j = 0; j < ov.n(); ++j)
        if (j != i) lits.push_back(ov.lit(j, i));
    return Clause::from_lits(std::move(lits));
}

// GT_{pi,n}: (alpha) clauses for minimal elements, (beta) transitivity
// clauses over triples of minimal elements, and (gamma) transitivity clauses
// T_{i,j,k} with i,j minimal, j below k, i not below k.
inline CnfFormula gt_pi_clauses(const BipartitePartialOrder& pi, int n) {
    if (pi.n != n) throw domain_error("bipartite order domain mismatch");
    OrderVars ov(n);
    CnfFormula f;
    f.num_vars = ov.count();
    ov.apply_names(f);
    for (int i : pi.minimal) f.add_clause(alpha_clause(ov, i));
    const auto& m = pi.minimal;
    for (size_t a = 0; a < m.size(); ++a)
        for (size_t b = a + 1; b < m.size(); ++b)
            for (size_t c = b + 1; c < m.size(); ++c) {
                f.add_clause(transitivity_clause(ov, m[a], m[b], m[c]));
                f.add_clause(transitivity_clause(ov, m[a], m[c], m[b]));
            }
    for (int i : pi.minimal)
        for (int j : pi.minimal) {
            if (i == j) continue;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (pi.less(j, k) && !pi.less(i, k))
                    f.add_clause(transitivity_clause(ov, i, j, k));
            }
        }
    return f;
}

}  // namespace poolres
