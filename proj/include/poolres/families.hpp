#pragma once

// Generators for the ordering tautology families GT_n and GGT_n, plus the
// guard functions r, s that split each transitivity clause of GGT_n into a
// guarded pair.

#include <array>
#include <random>

#include "poolres/orders.hpp"

namespace poolres {

// Canonical representative of the cyclic-rotation orbit of (i,j,k): the
// rotation that puts the smallest element first.
inline std::array<int, 3> orbit_rep(int i, int j, int k) {
    while (!(i < j && i < k)) {
        int t = i;
        i = j;
        j = k;
        k = t;
    }
    return {i, j, k};
}

// Guard functions on ordered triples of distinct elements of [n].
// Rotation-invariant; r != s; not both r and s inside the triple.
class GuardFunctions {
  public:
    GuardFunctions(int n, std::map<std::array<int, 3>, std::pair<int, int>> by_orbit)
        : n_(n), by_orbit_(std::move(by_orbit)) {
        validate();
    }

    int n() const { return n_; }

    std::pair<int, int> rs(int i, int j, int k) const {
        auto it = by_orbit_.find(orbit_rep(i, j, k));
        if (it == by_orbit_.end())
            throw domain_error("no guard for triple (" + std::to_string(i) + "," +
                               std::to_string(j) + "," + std::to_string(k) + ")");
        return it->second;
    }

    // The guard literal x_{r,s} for the triple.
    Lit guard_lit(const OrderVars& ov, int i, int j, int k) const {
        auto [r, s] = rs(i, j, k);
        return ov.lit(r, s);
    }

    const std::map<std::array<int, 3>, std::pair<int, int>>& orbits() const { return by_orbit_; }

  private:
    int n_;
    std::map<std::array<int, 3>, std::pair<int, int>> by_orbit_;

    void validate() const {
        for (const auto& [t, g] : by_orbit_) {
            auto [i, j, k] = t;
            auto [r, s] = g;
            auto fail = [&](const std::string& why) {
                throw domain_error("bad guard for triple (" + std::to_string(i) + "," +
                                   std::to_string(j) + "," + std::to_string(k) + "): " + why);
            };
            if (r == s) fail("r = s");
            if (r < 0 || s < 0 || r >= n_ || s >= n_) fail("out of range");
            bool r_in = r == i || r == j || r == k;
            bool s_in = s == i || s == j || s == k;
            if (r_in && s_in) fail("both endpoints inside the triple");
        }
    }
};

// Deterministic in (n, seed): one guard pair is sampled per rotation orbit
// and shared by all three rotations.
inline GuardFunctions make_guards(int n, uint64_t seed) {
    if (n < 4) throw domain_error("guarded triples need n >= 4");
    std::mt19937_64 rng(seed);
    std::map<std::array<int, 3>, std::pair<int, int>> by_orbit;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (auto [i, j, k] : {std::array<int, 3>{a, b, c}, std::array<int, 3>{a, c, b}}) {
                    while (true) {
                        int r = (int)(rng() % n);
                        int s = (int)(rng() % n);
                        if (r == s) continue;
                        bool r_in = r == i || r == j || r == k;
                        bool s_in = s == i || s == j || s == k;
                        if (r_in && s_in) continue;
                        by_orbit[{i, j, k}] = {r, s};
                        break;
                    }
                }
    return GuardFunctions(n, std::move(by_orbit));
}

// GT_n: alpha clauses plus one transitivity clause per rotation orbit,
// n + 2*C(n,3) clauses on C(n,2) variables.
inline CnfFormula gen_gt(int n) {
    if (n < 2) throw domain_error("gen_gt needs n >= 2");
    return gt_pi_clauses(BipartitePartialOrder::from_pairs(n, {}), n);
}

// GGT_n: alpha clauses plus, per transitivity orbit, the two guarded clauses
// T v x_{r,s} and T v ~x_{r,s}; n + 4*C(n,3) clauses.
inline CnfFormula gen_ggt(int n, const GuardFunctions& guards) {
    if (n < 4) throw domain_error("gen_ggt needs n >= 4");
    if (guards.n() != n) throw domain_error("guard functions built for different n");
    OrderVars ov(n);
    CnfFormula f;
    f.num_vars = ov.count();
    ov.apply_names(f);
    for (int i = 0; i < n; ++i) f.add_clause(alpha_clause(ov, i));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (auto [i, j, k] : {std::array<int, 3>{a, b, c}, std::array<int, 3>{a, c, b}}) {
                    Lit g = guards.guard_lit(ov, i, j, k);
                    Clause t = transitivity_clause(ov, i, j, k);
                    std::vector<Lit> pos(t.lits()), negv(t.lits());
                    pos.push_back(g);
                    negv.push_back(-g);
                    f.add_clause(Clause::from_lits(std::move(pos)));
                    f.add_clause(Clause::from_lits(std::move(negv)));
                }
    return f;
}

// Indices into gen_ggt's clause list for the guarded pair of a triple's
// orbit: alpha clauses occupy [0,n), then orbits in enumeration order with
// the positive-guard clause first.
inline std::pair<int, int> ggt_pair_indices(int n, int i, int j, int k) {
    auto rep = orbit_rep(i, j, k);
    int idx = 0;
    for (int a = 0; a < n && idx >= 0; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                if (rep == std::array<int, 3>{a, b, c}) return {n + 4 * idx, n + 4 * idx + 1};
                if (rep == std::array<int, 3>{a, c, b}) return {n + 4 * idx + 2, n + 4 * idx + 3};
                ++idx;
            }
    throw domain_error("triple out of range");
}

}  // namespace poolres
